#include "pfolio/returns_stats.hpp"

#include <algorithm>
#include <cmath>

#include "pfolio/error.hpp"
#include "pfolio/kernels.hpp"

namespace pfolio {

ReturnsMatrix daily_returns(const PricePanel& panel) {
    const auto t_count = static_cast<Eigen::Index>(panel.num_dates());
    if (t_count < 2) {
        throw Error(ErrorCode::InsufficientHistory, "returns need at least two price rows");
    }
    ReturnsMatrix out;
    out.tickers = panel.tickers;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    const auto& p = panel.closes;
    out.values = (p.bottomRows(t_count - 1) - p.topRows(t_count - 1)).cwiseQuotient(
        p.topRows(t_count - 1));
    return out;
}

CovarianceMatrix sample_covariance(const ReturnsMatrix& returns) {
    if (returns.values.rows() < 2) {
        throw Error(ErrorCode::InsufficientObservations,
                    "covariance needs at least two return rows, got " +
                        std::to_string(returns.values.rows()));
    }
    return {returns.tickers, kernels::parallel::covariance(returns.values)};
}

CorrelationMatrix correlation(const CovarianceMatrix& cov) {
    const Eigen::Index n = cov.values.rows();
    Eigen::VectorXd sd(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double v = cov.values(i, i);
        if (!(v > kVarianceFloor)) {
            throw Error(ErrorCode::ZeroVarianceAsset,
                        cov.tickers[static_cast<std::size_t>(i)] + " has variance " +
                            std::to_string(v));
        }
        sd(i) = std::sqrt(v);
    }
    CorrelationMatrix out{cov.tickers, Eigen::MatrixXd(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double rho = std::clamp(cov.values(i, j) / (sd(i) * sd(j)), -1.0, 1.0);
            out.values(i, j) = rho;
            out.values(j, i) = rho;
        }
    }
    return out;
}

Eigen::MatrixXd standardized_columns(const ReturnsMatrix& returns) {
    const auto& x = returns.values;
    if (x.rows() < 2) {
        throw Error(ErrorCode::InsufficientObservations, "standardizing needs two return rows");
    }
    Eigen::MatrixXd z(x.rows(), x.cols());
    const double denom = static_cast<double>(x.rows() - 1);
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double mean = x.col(j).mean();
        const double var = (x.col(j).array() - mean).square().sum() / denom;
        if (!(var > kVarianceFloor)) {
            throw Error(ErrorCode::ZeroVarianceAsset,
                        returns.tickers[static_cast<std::size_t>(j)] + " has variance " +
                            std::to_string(var));
        }
        z.col(j) = (x.col(j).array() - mean) / std::sqrt(var);
    }
    return z;
}

double annualize_volatility(double daily_volatility) {
    return daily_volatility * std::sqrt(kTradingDaysPerYear);
}

RiskMetrics sharpe_ratio(std::span<const double> daily, double risk_free) {
    if (daily.size() < 2) {
        throw Error(ErrorCode::InsufficientObservations, "Sharpe ratio needs two observations");
    }
    const auto n = static_cast<double>(daily.size());
    double sum = 0.0;
    for (double r : daily) sum += r;
    const double mean = sum / n;
    double ss = 0.0;
    for (double r : daily) ss += (r - mean) * (r - mean);
    const double var = ss / (n - 1.0);
    if (!(var > kVarianceFloor)) {
        throw Error(ErrorCode::ZeroVolatility, "return series is constant");
    }

    RiskMetrics m;
    m.daily_volatility = std::sqrt(var);
    m.annual_volatility = annualize_volatility(m.daily_volatility);
    m.annual_return = mean * kTradingDaysPerYear;
    m.sharpe_ratio = (m.annual_return - risk_free) / m.annual_volatility;
    return m;
}

}  // namespace pfolio
