#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "pfolio/market_data.hpp"
#include "pfolio/portfolio.hpp"
#include "pfolio/returns_stats.hpp"

namespace pfolio {

struct PeriodMetrics {
    double volatility = 0.0;  ///< annualized
    double sharpe = 0.0;

    bool operator==(const PeriodMetrics&) const = default;
};

struct MethodReport {
    PeriodMetrics train;
    PeriodMetrics test;
    std::vector<double> train_series;
    std::vector<double> test_series;
};

struct BacktestMetadata {
    double risk_free = 0.0;
    double trading_days = kTradingDaysPerYear;
    std::string covariance = "sample_n_minus_1";
    std::string rebalancing = "fixed_weights_daily";
    double transaction_costs = 0.0;
    std::string train_start, train_end, test_start, test_end;
    std::string config_hash;
    /// Extra key/value pairs (eigen standardization flag, distance mode, ...).
    std::map<std::string, std::string> extra;

    bool operator==(const BacktestMetadata&) const = default;
};

/// Train/test volatility and Sharpe per method, one sector.
struct BacktestReport {
    std::string sector;
    std::map<Method, MethodReport> methods;
    std::vector<Date> train_dates;
    std::vector<Date> test_dates;
    BacktestMetadata metadata;
};

enum class Winner { Eigen, Hrp, Tie };

std::string_view to_string(Winner winner) noexcept;

struct SectorOutcome {
    std::string sector;
    Winner train = Winner::Tie;
    Winner test = Winner::Tie;
};

struct WinnerCounts {
    std::size_t hrp = 0;
    std::size_t eigen = 0;
    std::size_t tie = 0;
};

struct ComparisonSummary {
    std::vector<SectorOutcome> sectors;
    WinnerCounts train;
    WinnerCounts test;
};

/// Fixed-weight daily portfolio return, r_p(t) = sum_i w_i r_i(t).
/// Every weighted ticker must be present in `returns`; unlisted tickers get 0.
std::vector<double> portfolio_daily_returns(const PortfolioWeights& weights,
                                            const ReturnsMatrix& returns);

/// Series-based annualized volatility and Sharpe ratio.
PeriodMetrics period_metrics(std::span<const double> series, double risk_free);

BacktestReport evaluate(std::string sector, std::span<const PortfolioWeights> weights_by_method,
                        const PricePanel& train, const PricePanel& test, double risk_free = 0.0);

/// Per-sector winner by strictly higher Sharpe; equal Sharpes are a tie.
ComparisonSummary summarize(std::span<const BacktestReport> reports);

}  // namespace pfolio
