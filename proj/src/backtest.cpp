#include "pfolio/backtest.hpp"

#include "pfolio/error.hpp"
#include "pfolio/kernels.hpp"

namespace pfolio {

namespace {

Winner compare(double hrp, double eigen) {
    if (hrp > eigen) return Winner::Hrp;
    if (eigen > hrp) return Winner::Eigen;
    return Winner::Tie;
}

void count(WinnerCounts& counts, Winner w) {
    switch (w) {
        case Winner::Hrp: ++counts.hrp; break;
        case Winner::Eigen: ++counts.eigen; break;
        case Winner::Tie: ++counts.tie; break;
    }
}

}  // namespace

std::string_view to_string(Winner winner) noexcept {
    switch (winner) {
        case Winner::Hrp: return "HRP";
        case Winner::Eigen: return "EIGEN";
        case Winner::Tie: return "TIE";
    }
    return "TIE";
}

std::vector<double> portfolio_daily_returns(const PortfolioWeights& weights,
                                            const ReturnsMatrix& returns) {
    if (weights.tickers.size() != weights.weights.size()) {
        throw Error(ErrorCode::InvalidArgument, "weights and tickers differ in length");
    }
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(returns.num_assets()));
    for (std::size_t k = 0; k < weights.tickers.size(); ++k) {
        const auto& ticker = weights.tickers[k];
        std::size_t col = 0;
        while (col < returns.tickers.size() && returns.tickers[col] != ticker) ++col;
        if (col == returns.tickers.size()) {
            throw Error(ErrorCode::TickerMismatch, ticker + " is not in the return panel");
        }
        w(static_cast<Eigen::Index>(col)) = weights.weights[k];
    }
    const Eigen::VectorXd r = kernels::parallel::weighted_rows(returns.values, w);
    return {r.data(), r.data() + r.size()};
}

PeriodMetrics period_metrics(std::span<const double> series, double risk_free) {
    const RiskMetrics m = sharpe_ratio(series, risk_free);
    return {m.annual_volatility, m.sharpe_ratio};
}

BacktestReport evaluate(std::string sector, std::span<const PortfolioWeights> weights_by_method,
                        const PricePanel& train, const PricePanel& test, double risk_free) {
    const ReturnsMatrix train_returns = daily_returns(train);
    const ReturnsMatrix test_returns = daily_returns(test);

    BacktestReport report;
    report.sector = std::move(sector);
    report.train_dates = train_returns.dates;
    report.test_dates = test_returns.dates;
    report.metadata.risk_free = risk_free;
    report.metadata.train_start = format_date(train.dates.front());
    report.metadata.train_end = format_date(train.dates.back());
    report.metadata.test_start = format_date(test.dates.front());
    report.metadata.test_end = format_date(test.dates.back());

    for (const auto& weights : weights_by_method) {
        if (report.methods.contains(weights.method)) {
            throw Error(ErrorCode::InvalidArgument,
                        "two portfolios for method " + std::string(to_string(weights.method)));
        }
        MethodReport mr;
        mr.train_series = portfolio_daily_returns(weights, train_returns);
        mr.test_series = portfolio_daily_returns(weights, test_returns);
        mr.train = period_metrics(mr.train_series, risk_free);
        mr.test = period_metrics(mr.test_series, risk_free);
        report.methods.emplace(weights.method, std::move(mr));
    }
    return report;
}

ComparisonSummary summarize(std::span<const BacktestReport> reports) {
    ComparisonSummary summary;
    for (const auto& report : reports) {
        const auto hrp = report.methods.find(Method::Hrp);
        const auto eigen = report.methods.find(Method::Eigen);
        if (hrp == report.methods.end() || eigen == report.methods.end()) {
            throw Error(ErrorCode::InvalidArgument,
                        report.sector + ": report needs both HRP and EIGEN results");
        }
        SectorOutcome outcome{report.sector,
                              compare(hrp->second.train.sharpe, eigen->second.train.sharpe),
                              compare(hrp->second.test.sharpe, eigen->second.test.sharpe)};
        count(summary.train, outcome.train);
        count(summary.test, outcome.test);
        summary.sectors.push_back(std::move(outcome));
    }
    return summary;
}

}  // namespace pfolio
