#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pfolio/returns_stats.hpp"
#include "oracles.hpp"
#include "helpers.hpp"

using namespace pfolio;
using testing_util::code_of;
using testing_util::returns_of;

namespace {

PricePanel panel_of(const Eigen::MatrixXd& closes) {
    PricePanel p;
    p.closes = closes;
    for (Eigen::Index i = 0; i < closes.cols(); ++i) p.tickers.push_back("P" + std::to_string(i));
    for (Eigen::Index t = 0; t < closes.rows(); ++t) p.dates.push_back(make_date(2020, 1, 1) + std::chrono::days{t});
    return p;
}

}  // namespace

TEST(DailyReturns, SimpleReturn) {
    Eigen::MatrixXd c(3, 1);
    c << 100, 110, 99;
    const auto r = daily_returns(panel_of(c));
    ASSERT_EQ(r.values.rows(), 2);
    EXPECT_NEAR(r.values(0, 0), 0.1, 1e-15);
    EXPECT_NEAR(r.values(1, 0), -0.1, 1e-15);
    EXPECT_EQ(r.dates.front(), make_date(2020, 1, 2));
}

TEST(DailyReturns, ScaleInvariant) {
    const Eigen::MatrixXd c = (testing_util::random_matrix(30, 3, 5).array() + 1.0).matrix() * 50.0;
    const auto a = daily_returns(panel_of(c));
    const auto b = daily_returns(panel_of(c * 7.0));
    EXPECT_TRUE(a.values.isApprox(b.values, 1e-12));
}

TEST(DailyReturns, NeedsTwoRows) {
    EXPECT_EQ(code_of([] { daily_returns(panel_of(Eigen::MatrixXd::Ones(1, 2))); }),
              ErrorCode::InsufficientHistory);
}

TEST(SampleCovariance, MatchesBruteForce) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Eigen::MatrixXd x = testing_util::random_matrix(60, 7, seed);
        const auto cov = sample_covariance(returns_of(x));
        EXPECT_LT((cov.values - oracle::brute_covariance(x)).cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_EQ(cov.values, cov.values.transpose());
    }
}

TEST(SampleCovariance, PositiveSemiDefinite) {
    const Eigen::MatrixXd x = testing_util::random_matrix(5, 8, 3);  // rank deficient
    const auto cov = sample_covariance(returns_of(x));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov.values);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-15);
}

TEST(SampleCovariance, OneRowFails) {
    EXPECT_EQ(code_of([] { sample_covariance(returns_of(Eigen::MatrixXd::Ones(1, 3))); }),
              ErrorCode::InsufficientObservations);
}

TEST(Correlation, UnitDiagonalAndBounded) {
    const auto cov = sample_covariance(returns_of(testing_util::random_matrix(40, 6, 9)));
    const auto corr = correlation(cov);
    for (Eigen::Index i = 0; i < 6; ++i) {
        EXPECT_EQ(corr.values(i, i), 1.0);
        for (Eigen::Index j = 0; j < 6; ++j) {
            EXPECT_LE(std::abs(corr.values(i, j)), 1.0);
            EXPECT_EQ(corr.values(i, j), corr.values(j, i));
        }
    }
}

TEST(Correlation, ZeroVarianceAssetIsNamed) {
    Eigen::MatrixXd x = testing_util::random_matrix(20, 3, 2);
    x.col(1).setConstant(0.001);
    const auto cov = sample_covariance(returns_of(x));
    try {
        correlation(cov);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroVarianceAsset);
        EXPECT_NE(std::string(e.what()).find("A1"), std::string::npos);
    }
}

TEST(StandardizedColumns, UnitVariance) {
    const auto z = standardized_columns(returns_of(testing_util::random_matrix(50, 4, 4)));
    const auto cov = oracle::brute_covariance(z);
    for (Eigen::Index i = 0; i < 4; ++i) {
        EXPECT_NEAR(z.col(i).mean(), 0.0, 1e-15);
        EXPECT_NEAR(cov(i, i), 1.0, 1e-12);
    }
}

TEST(Metrics, AnnualizedVolatility) {
    EXPECT_NEAR(annualize_volatility(0.01), 0.158114, 1e-6);
}

TEST(Metrics, SharpeFromSeries) {
    // mean 0.0004, sample sd exactly 0.01
    const double s = 0.01 * std::sqrt(3.0 / 4.0);
    const std::vector<double> r{0.0004 + s, 0.0004 - s, 0.0004 + s, 0.0004 - s};
    const auto m = sharpe_ratio(r);
    EXPECT_NEAR(m.daily_volatility, 0.01, 1e-15);
    EXPECT_NEAR(m.annual_volatility, 0.158114, 1e-6);
    EXPECT_NEAR(m.annual_return, 0.1, 1e-12);
    EXPECT_NEAR(m.sharpe_ratio, 0.632456, 1e-5);
    EXPECT_NEAR(sharpe_ratio(r, 0.05).sharpe_ratio, 0.05 / 0.158113883, 1e-6);
}

TEST(Metrics, ConstantSeriesIsZeroVolatility) {
    const std::vector<double> r(10, 0.001);
    EXPECT_EQ(code_of([&] { sharpe_ratio(r); }), ErrorCode::ZeroVolatility);
    const std::vector<double> one{0.01};
    EXPECT_EQ(code_of([&] { sharpe_ratio(one); }), ErrorCode::InsufficientObservations);
}
