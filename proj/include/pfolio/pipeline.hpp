#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pfolio/backtest.hpp"
#include "pfolio/config.hpp"
#include "pfolio/eigen_portfolio.hpp"
#include "pfolio/hrp.hpp"

namespace pfolio {

/// Both portfolios for one sector, fitted on training prices only.
struct PortfolioBuild {
    HrpResult hrp;
    PcaModel pca;
    std::size_t components = 0;
    EigenSelection eigen;
};

/// Reads and aligns the prices of one sector (all dates, both periods).
PricePanel load_sector_panel(const SectorSpec& sector, const ExperimentConfig& config);

PortfolioBuild build_portfolios(const PricePanel& train_panel, const ExperimentConfig& config);

enum class RunMode { Run, Build, Backtest };
enum class ReportFormat { Json, Csv };

struct RunOptions {
    RunMode mode = RunMode::Run;
    std::size_t jobs = 1;
    ReportFormat format = ReportFormat::Json;
    std::optional<std::string> sector_filter;
    /// Where `backtest` mode reads <sector>/weights_{hrp,eigen}.csv.
    /// Defaults to the output directory.
    std::optional<std::filesystem::path> weights_dir;
};

struct StageError {
    std::string file;
    std::string sector;
    std::string stage;
    std::string cause;
};

struct RunOutcome {
    std::vector<std::string> completed_sectors;
    std::vector<BacktestReport> reports;
    std::vector<StageError> errors;

    /// 0 when every selected sector finished, 1 otherwise.
    int exit_code() const { return errors.empty() ? 0 : 1; }
};

/// Processes every selected sector (concurrently up to `jobs`) and writes the
/// per-sector artifacts plus the cross-sector summary under config.output_dir.
/// A failing sector is recorded in errors.json and does not stop the others.
RunOutcome run_experiment(const ExperimentConfig& config, const RunOptions& options);

}  // namespace pfolio
