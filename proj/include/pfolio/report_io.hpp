#pragma once

// Serialization of every artifact the CLI writes. JSON numbers are emitted at
// round-trip precision so a parsed report compares bit-equal to the original.

#include <filesystem>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "pfolio/backtest.hpp"
#include "pfolio/eigen_portfolio.hpp"
#include "pfolio/hrp.hpp"

namespace pfolio {

using Json = nlohmann::json;

Json report_to_json(const BacktestReport& report);

/// Inverse of report_to_json. Series and date vectors are not part of the
/// JSON form and come back empty.
BacktestReport report_from_json(const Json& j);

Json summary_to_json(const ComparisonSummary& summary);

/// `{leaves: [...], linkage: [[left, right, height, size], ...], root: {id, height, children}}`.
Json dendrogram_to_json(const LinkageTree& tree, const std::vector<std::string>& tickers);

/// Pretty-printed, newline-terminated.
std::string dump(const Json& j);

std::string report_to_csv(const BacktestReport& report);
std::string summary_to_csv(const ComparisonSummary& summary);

/// `ticker,weight` rows in the order given by `order` (all rows when empty).
std::string weights_to_csv(const PortfolioWeights& weights,
                           const std::vector<std::size_t>& order = {});
PortfolioWeights weights_from_csv(std::istream& in, Method method);

std::string candidates_to_csv(const std::vector<EigenCandidate>& candidates,
                              const std::vector<std::string>& tickers);

/// `date,EIGEN,HRP` for one period.
std::string series_to_csv(const BacktestReport& report, PeriodLabel period);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

/// Writes `content` to a sibling temp file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace pfolio
