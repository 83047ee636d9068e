// Prints one PASS/FAIL line per acceptance criterion; exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include <spdlog/spdlog.h>

#include "pfolio/pipeline.hpp"
#include "pfolio/report_io.hpp"
#include "pfolio/synthetic.hpp"
#include "oracles.hpp"
#include "tables.hpp"

using namespace pfolio;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

CovarianceMatrix cov_of(const Eigen::MatrixXd& m) {
    CovarianceMatrix c;
    c.values = m;
    for (Eigen::Index i = 0; i < m.rows(); ++i) c.tickers.push_back("A" + std::to_string(i));
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
    }
    return out;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("pfolio_acceptance_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path bundled_fixture() { return fs::path(PFOLIO_DATA_DIR) / "fixtures" / "seven_sector"; }

Outcome diagonal_oracle() {
    std::mt19937_64 rng(20211101);
    std::uniform_real_distribution<double> var(1e-5, 1e-2);
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = 2 + trial % 9;
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = var(rng);
        const auto cov = cov_of(v.asDiagonal().toDenseMatrix());
        const auto tree = ward_linkage(correlation_distance(correlation(cov)));
        const auto w = recursive_bisection(cov, quasi_diagonalize(tree));
        const auto expect = oracle::ivp(cov.values);
        for (std::size_t i = 0; i < expect.size(); ++i) worst = std::max(worst, std::abs(w.weights[i] - expect[i]));
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-10 && secs < 1.0, fmt("max |w - ivp| = %.3g over 50 cases in %.3f s", worst, secs)};
}

Outcome singularity() {
    int bad = 0;
    double worst_sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        auto r = synthetic::factor_returns(600, 8, seed);
        const Eigen::Index src = static_cast<Eigen::Index>(seed % 8);
        const Eigen::Index dst = static_cast<Eigen::Index>((seed + 3) % 8);
        r.values.col(dst) = r.values.col(src);
        const auto res = build_hrp_portfolio(r);
        const double sum = std::accumulate(res.weights.weights.begin(), res.weights.weights.end(), 0.0);
        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
        for (double w : res.weights.weights) bad += !(std::isfinite(w) && w > 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(res.covariance.values);
        if (es.eigenvalues().minCoeff() > 1e-14) ++bad;  // covariance must really be singular
    }
    return {bad == 0 && worst_sum <= 1e-9,
            fmt("8 duplicated-column panels, max |sum - 1| = %.3g, invalid = %d", worst_sum, bad)};
}

Outcome block_seriation() {
    std::mt19937_64 rng(7);
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        std::vector<std::size_t> block_of{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
        std::shuffle(block_of.begin(), block_of.end(), rng);
        const auto r = synthetic::block_returns(1250, block_of, 0.9, 0.01, seed);
        const auto order = build_hrp_portfolio(r).order.order;
        std::size_t runs = 0;
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (k == 0 || block_of[order[k]] != block_of[order[k - 1]]) ++runs;
        }
        ok += runs == 2;
    }
    return {ok == 100, fmt("%d/100 seeds contiguous", ok)};
}

Outcome linkage_oracle() {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    double worst = 0.0;
    int mismatched = 0;
    for (int trial = 0; trial < 20; ++trial) {
        DistanceMatrix d;
        d.values = Eigen::MatrixXd::Zero(6, 6);
        for (Eigen::Index i = 0; i < 6; ++i) {
            d.tickers.push_back("A" + std::to_string(i));
            for (Eigen::Index j = i + 1; j < 6; ++j) d.values(i, j) = d.values(j, i) = u(rng);
        }
        const auto tree = ward_linkage(d);
        const auto brute = oracle::brute_ward(d.values);
        for (std::size_t k = 0; k < brute.size(); ++k) {
            const auto& row = tree.rows[k];
            if (row.left != brute[k].left || row.right != brute[k].right || row.size != brute[k].size) ++mismatched;
            worst = std::max(worst, std::abs(row.height - brute[k].height));
        }
    }
    return {mismatched == 0 && worst <= 1e-10,
            fmt("20 matrices, merge mismatches = %d, max height diff = %.3g", mismatched, worst)};
}

Outcome pca_oracle() {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    double value_err = 0, poly_err = 0, vector_err = 0, ortho_err = 0, recon_err = 0, ratio_err = 0;
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::MatrixXd x(30, 4);
        for (Eigen::Index t = 0; t < 30; ++t)
            for (Eigen::Index i = 0; i < 4; ++i) x(t, i) = g(rng) * (1.0 + static_cast<double>(i));
        const Eigen::MatrixXd cov = oracle::brute_covariance(x);
        const auto m = pca_from_matrix({"A", "B", "C", "D"}, cov, false);

        auto [values, vectors] = oracle::jacobi_eigen(cov);
        const auto roots = oracle::char_poly_roots(cov);
        if (roots.size() != 4) return {false, fmt("trial %d: char poly gave %zu roots", trial, roots.size())};
        for (Eigen::Index k = 0; k < 4; ++k) {
            value_err = std::max(value_err, std::abs(m.eigenvalues(k) - values(k)));
            poly_err = std::max(poly_err, std::abs(m.eigenvalues(k) - roots[static_cast<std::size_t>(k)]));
            Eigen::VectorXd v = vectors.col(k);
            Eigen::Index pivot;
            v.cwiseAbs().maxCoeff(&pivot);
            if (v(pivot) < 0) v = -v;
            vector_err = std::max(vector_err, (m.loadings.col(k) - v).cwiseAbs().maxCoeff());
        }
        ortho_err = std::max(ortho_err, (m.loadings.transpose() * m.loadings - Eigen::Matrix4d::Identity())
                                            .cwiseAbs().maxCoeff());
        recon_err = std::max(recon_err, (m.loadings * m.eigenvalues.asDiagonal() * m.loadings.transpose() - cov)
                                            .cwiseAbs().maxCoeff());
        ratio_err = std::max(ratio_err, std::abs(m.explained_ratio.sum() - 1.0));
    }
    const bool ok = value_err <= 1e-8 && poly_err <= 1e-8 && vector_err <= 1e-8 && ortho_err <= 1e-8 &&
                    recon_err <= 1e-8 && ratio_err <= 1e-9;
    return {ok, fmt("eig vs jacobi %.2g, vs char poly %.2g, vectors %.2g, orthonormality %.2g, "
                    "reconstruction %.2g, ratio sum %.2g",
                    value_err, poly_err, vector_err, ortho_err, recon_err, ratio_err)};
}

Outcome metric_arithmetic() {
    const double annual = annualize_volatility(0.01);
    const double s = 0.01 * std::sqrt(3.0 / 4.0);
    const std::vector<double> series{0.0004 + s, 0.0004 - s, 0.0004 + s, 0.0004 - s};
    const auto m = sharpe_ratio(series);
    const bool ok = std::abs(annual - 0.158114) <= 1e-6 && std::abs(m.annual_volatility - 0.158114) <= 1e-6 &&
                    std::abs(m.sharpe_ratio - 0.632456) <= 1e-5;
    return {ok, fmt("annual vol %.6f, Sharpe %.6f", annual, m.sharpe_ratio)};
}

Outcome report_schema() {
    const auto table1 = tables::report_of(tables::kRows[0]);
    const std::string text = dump(report_to_json(table1));
    const auto back = report_from_json(Json::parse(text));
    bool exact = back.metadata == table1.metadata && back.sector == table1.sector;
    for (auto method : {Method::Eigen, Method::Hrp}) {
        exact = exact && back.methods.at(method).train == table1.methods.at(method).train &&
                back.methods.at(method).test == table1.methods.at(method).test;
    }
    exact = exact && dump(report_to_json(back)) == text;
    const auto reports = tables::all_reports();
    const auto summary = summarize(reports);
    const bool counts = summary.train.hrp == 4 && summary.test.hrp == 5;
    return {exact && counts, fmt("round trip %s; HRP wins %zu/7 train, %zu/7 test", exact ? "exact" : "differs",
                                 summary.train.hrp, summary.test.hrp)};
}

Outcome determinism_and_scale() {
    const fs::path fixture = bundled_fixture();
    const fs::path regen = scratch("regen");
    synthetic::write_fixture(regen, 7, 10, 20211101);
    const bool fixture_matches = tree_contents(regen) == tree_contents(fixture);

    auto loaded = load_config(fixture / "config.json");
    if (!loaded.ok()) return {false, "bundled fixture config does not load"};
    ExperimentConfig cfg = *loaded.config;

    const fs::path a = scratch("run_a"), b = scratch("run_b");
    cfg.output_dir = a;
    const auto t0 = Clock::now();
    const auto first = run_experiment(cfg, RunOptions{.jobs = 1});
    const double run_secs = seconds_since(t0);
    cfg.output_dir = b;
    const auto second = run_experiment(cfg, RunOptions{.jobs = 4});
    const bool identical = tree_contents(a) == tree_contents(b);
    const bool complete = first.completed_sectors.size() == 7 && second.completed_sectors.size() == 7;

    const auto big = synthetic::factor_returns(1250, 500, 3);
    const auto t1 = Clock::now();
    const auto hrp = build_hrp_portfolio(big);
    const double hrp_secs = seconds_since(t1);
    const double sum = std::accumulate(hrp.weights.weights.begin(), hrp.weights.weights.end(), 0.0);

    const bool ok = fixture_matches && complete && identical && run_secs < 10.0 && hrp_secs < 5.0 &&
                    std::abs(sum - 1.0) < 1e-9;
    return {ok, fmt("fixture %s generator; 7-sector run %.2f s, %zu/7 sectors, artifacts %s; "
                    "500-asset HRP %.2f s",
                    fixture_matches ? "matches" : "differs from", run_secs, first.completed_sectors.size(),
                    identical ? "byte-identical" : "differ", hrp_secs)};
}

Outcome no_look_ahead() {
    auto loaded = load_config(bundled_fixture() / "config.json");
    if (!loaded.ok()) return {false, "bundled fixture config does not load"};
    const ExperimentConfig cfg = *loaded.config;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> factor(0.5, 2.0);
    std::size_t changed = 0, perturbed_rows = 0;
    for (const auto& sector : cfg.sectors) {
        const PricePanel panel = load_sector_panel(sector, cfg);
        PricePanel shocked = panel;
        for (std::size_t t = 0; t < panel.dates.size(); ++t) {
            if (panel.dates[t] < cfg.test.start) continue;
            ++perturbed_rows;
            for (Eigen::Index i = 0; i < shocked.closes.cols(); ++i)
                shocked.closes(static_cast<Eigen::Index>(t), i) *= factor(rng);
        }
        const auto before = build_portfolios(slice_period(panel, cfg.train), cfg);
        const auto after = build_portfolios(slice_period(shocked, cfg.train), cfg);
        changed += before.hrp.weights.weights != after.hrp.weights.weights;
        changed += before.eigen.best.weights != after.eigen.best.weights;
    }
    return {changed == 0 && perturbed_rows > 0,
            fmt("%zu test-period rows perturbed across 7 sectors, %zu portfolios changed", perturbed_rows,
                changed)};
}

}  // namespace

int main() {
    spdlog::set_level(spdlog::level::off);
    report("diagonal-covariance oracle", diagonal_oracle);
    report("singularity robustness", singularity);
    report("block seriation", block_seriation);
    report("linkage oracle", linkage_oracle);
    report("pca oracle", pca_oracle);
    report("metric arithmetic", metric_arithmetic);
    report("report schema fixture", report_schema);
    report("end-to-end determinism and scale", determinism_and_scale);
    report("no look-ahead", no_look_ahead);
    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
