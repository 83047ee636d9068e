#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pfolio/eigen_portfolio.hpp"
#include "pfolio/hrp.hpp"
#include "pfolio/market_data.hpp"
#include "pfolio/report_io.hpp"

namespace pfolio {

/// Where a sector's prices live. Exactly one of the two paths is set.
struct SectorSpec {
    std::string name;
    std::vector<std::string> tickers;
    std::optional<std::filesystem::path> data_dir;  ///< holds <TICKER>.csv files
    std::optional<std::filesystem::path> wide_csv;  ///< Date + one column per ticker
};

struct ExperimentConfig {
    std::vector<SectorSpec> sectors;
    PeriodSpec train{PeriodLabel::Train, make_date(2016, 1, 1), make_date(2020, 12, 31)};
    PeriodSpec test{PeriodLabel::Test, make_date(2021, 1, 1), make_date(2021, 11, 1)};
    double risk_free = 0.0;
    AlignmentPolicy alignment = AlignmentPolicy::Intersection;
    MissingClosePolicy missing_close = MissingClosePolicy::Skip;
    HrpConfig hrp;
    EigenConfig eigen;
    std::filesystem::path output_dir = "out";

    /// Fields that were absent and took their default, e.g. "risk_free=0".
    std::vector<std::string> applied_defaults;

    /// Normalized form with every default filled in.
    Json to_json() const;

    /// Stable FNV-1a hash of to_json() without output and data paths.
    std::string hash() const;
};

struct ConfigResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool ok() const { return config.has_value() && errors.empty(); }
};

/// Parses a JSON config. Relative data paths resolve against `base_dir`.
/// All problems are collected rather than stopping at the first; unknown keys
/// only produce warnings.
ConfigResult validate_config(std::string_view text, const std::filesystem::path& base_dir);

ConfigResult load_config(const std::filesystem::path& path);

/// Applies PFOLIO_RISK_FREE and PFOLIO_OUT_DIR when set. Returns error strings.
std::vector<std::string> apply_env_overrides(ExperimentConfig& config);

}  // namespace pfolio
