#include <benchmark/benchmark.h>

#include <numeric>

#include "pfolio/hrp.hpp"
#include "pfolio/kernels.hpp"
#include "pfolio/synthetic.hpp"

namespace k = pfolio::kernels;

namespace {

Eigen::MatrixXd returns(Eigen::Index assets) {
    return pfolio::synthetic::factor_returns(1250, static_cast<std::size_t>(assets), 1).values;
}

Eigen::MatrixXd distances(Eigen::Index assets) {
    return k::serial::pairwise_column_distance(returns(assets));
}

template <Eigen::MatrixXd (*F)(const Eigen::MatrixXd&)>
void BM_Matrix(benchmark::State& state, Eigen::MatrixXd (*prepare)(Eigen::Index)) {
    const Eigen::MatrixXd x = prepare(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(F(x));
}

void BM_CovarianceSerial(benchmark::State& s) { BM_Matrix<k::serial::covariance>(s, returns); }
void BM_CovarianceParallel(benchmark::State& s) { BM_Matrix<k::parallel::covariance>(s, returns); }
void BM_DistanceSerial(benchmark::State& s) { BM_Matrix<k::serial::pairwise_column_distance>(s, returns); }
void BM_DistanceParallel(benchmark::State& s) { BM_Matrix<k::parallel::pairwise_column_distance>(s, returns); }

template <Eigen::VectorXd (*F)(const Eigen::MatrixXd&, const Eigen::VectorXd&)>
void BM_Weighted(benchmark::State& state) {
    const Eigen::MatrixXd x = returns(state.range(0));
    const Eigen::VectorXd w = Eigen::VectorXd::Constant(x.cols(), 1.0 / static_cast<double>(x.cols()));
    for (auto _ : state) benchmark::DoNotOptimize(F(x, w));
}

template <k::ClosestPair (*F)(const Eigen::MatrixXd&, std::span<const std::size_t>,
                              std::span<const std::size_t>)>
void BM_ClosestPair(benchmark::State& state) {
    const Eigen::MatrixXd d = distances(state.range(0));
    std::vector<std::size_t> active(static_cast<std::size_t>(d.rows()));
    std::iota(active.begin(), active.end(), 0);
    for (auto _ : state) benchmark::DoNotOptimize(F(d, active, active));
}

void BM_HrpBuild(benchmark::State& state) {
    const auto r = pfolio::synthetic::factor_returns(1250, static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(pfolio::build_hrp_portfolio(r));
}

}  // namespace

BENCHMARK(BM_CovarianceSerial)->Arg(50)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CovarianceParallel)->Arg(50)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistanceSerial)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistanceParallel)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Weighted<k::serial::weighted_rows>)->Arg(50)->Arg(500);
BENCHMARK(BM_Weighted<k::parallel::weighted_rows>)->Arg(50)->Arg(500);
BENCHMARK(BM_ClosestPair<k::serial::closest_pair>)->Arg(100)->Arg(500);
BENCHMARK(BM_ClosestPair<k::parallel::closest_pair>)->Arg(100)->Arg(500);
BENCHMARK(BM_HrpBuild)->Arg(10)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
