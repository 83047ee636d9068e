#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "pfolio/date.hpp"
#include "pfolio/market_data.hpp"

namespace pfolio {

/// Trading days per calendar year used for every annualization.
inline constexpr double kTradingDaysPerYear = 250.0;

/// Variances below this (return^2 per day) are treated as zero.
inline constexpr double kVarianceFloor = 1e-16;

/// Simple daily returns; row t is stamped with the later of the two days.
struct ReturnsMatrix {
    std::vector<std::string> tickers;
    std::vector<Date> dates;
    Eigen::MatrixXd values;  // (T-1) x N

    std::size_t num_rows() const { return dates.size(); }
    std::size_t num_assets() const { return tickers.size(); }
};

/// Symmetric, positive semi-definite; singular matrices are allowed.
struct CovarianceMatrix {
    std::vector<std::string> tickers;
    Eigen::MatrixXd values;
};

struct CorrelationMatrix {
    std::vector<std::string> tickers;
    Eigen::MatrixXd values;
};

struct RiskMetrics {
    double daily_volatility = 0.0;
    double annual_volatility = 0.0;
    double annual_return = 0.0;
    double sharpe_ratio = 0.0;
};

ReturnsMatrix daily_returns(const PricePanel& panel);

/// Unbiased (n-1) sample covariance. Throws InsufficientObservations below 2 rows.
CovarianceMatrix sample_covariance(const ReturnsMatrix& returns);

/// Throws ZeroVarianceAsset naming the first ticker whose variance is below
/// kVarianceFloor. Off-diagonal entries are clamped to [-1, 1].
CorrelationMatrix correlation(const CovarianceMatrix& cov);

/// Columns centred and scaled to unit sample standard deviation.
Eigen::MatrixXd standardized_columns(const ReturnsMatrix& returns);

double annualize_volatility(double daily_volatility);

/// Annualized mean, sample volatility and Sharpe ratio of a daily return
/// series. `risk_free` is an annual rate.
RiskMetrics sharpe_ratio(std::span<const double> daily_returns, double risk_free = 0.0);

}  // namespace pfolio
