#include "pfolio/eigen_portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pfolio/error.hpp"
#include "pfolio/kernels.hpp"

namespace pfolio {

namespace {

constexpr double kEigenvalueFloor = -1e-10;
constexpr double kLoadingSumFloor = 1e-8;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

PcaModel pca_from_matrix(std::vector<std::string> tickers, const Eigen::MatrixXd& symmetric,
                         bool standardized) {
    const Eigen::Index n = symmetric.rows();
    if (n == 0 || symmetric.cols() != n) {
        throw Error(ErrorCode::InvalidArgument, "PCA needs a non-empty square matrix");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::InvalidArgument, "eigendecomposition did not converge");
    }

    PcaModel model;
    model.tickers = std::move(tickers);
    model.standardized = standardized;
    model.eigenvalues.resize(n);
    model.loadings.resize(n, n);
    // Eigen returns ascending eigenvalues.
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = n - 1 - k;
        double lambda = solver.eigenvalues()(src);
        if (lambda < 0.0) {
            if (lambda < kEigenvalueFloor) {
                throw Error(ErrorCode::InvalidArgument,
                            "matrix is not positive semi-definite (eigenvalue " +
                                format_double(lambda) + ")");
            }
            lambda = 0.0;
        }
        model.eigenvalues(k) = lambda;

        Eigen::VectorXd v = solver.eigenvectors().col(src);
        Eigen::Index pivot = 0;
        for (Eigen::Index i = 1; i < n; ++i) {
            if (std::abs(v(i)) > std::abs(v(pivot))) pivot = i;
        }
        if (v(pivot) < 0.0) v = -v;
        model.loadings.col(k) = v;
    }

    const double total = model.eigenvalues.sum();
    if (!(total > 0.0)) throw Error(ErrorCode::InvalidArgument, "matrix has zero trace");
    model.explained_ratio = model.eigenvalues / total;
    return model;
}

PcaModel fit_pca(const ReturnsMatrix& returns, bool standardize) {
    const CovarianceMatrix cov = sample_covariance(returns);
    if (standardize) return pca_from_matrix(returns.tickers, correlation(cov).values, true);
    return pca_from_matrix(returns.tickers, cov.values, false);
}

std::size_t min_components_for_variance(const PcaModel& model, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "variance threshold must be in (0, 1]");
    }
    const auto n = static_cast<std::size_t>(model.explained_ratio.size());
    double cumulative = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = model.explained_ratio(static_cast<Eigen::Index>(k));
        if (r > 0.0) last_nonzero = k + 1;
        cumulative += r;
        // Rounding in the cumulative sum must not push k past the last
        // component that carries variance.
        if (cumulative >= threshold - 1e-12) return k + 1;
    }
    return std::max<std::size_t>(last_nonzero, 1);
}

std::vector<double> candidate_weights(const PcaModel& model, std::size_t component_index) {
    const auto n = static_cast<std::size_t>(model.loadings.cols());
    if (component_index < 1 || component_index > n) {
        throw Error(ErrorCode::InvalidArgument,
                    "component index " + std::to_string(component_index) + " out of range");
    }
    const Eigen::VectorXd loading = model.loadings.col(static_cast<Eigen::Index>(component_index - 1));
    const double sum = loading.sum();
    if (std::abs(sum) < kLoadingSumFloor) {
        throw Error(ErrorCode::DegenerateLoadingSum,
                    "component " + std::to_string(component_index) + " loadings sum to " +
                        format_double(sum));
    }
    std::vector<double> w(static_cast<std::size_t>(loading.size()));
    for (Eigen::Index i = 0; i < loading.size(); ++i) w[static_cast<std::size_t>(i)] = loading(i) / sum;
    return w;
}

std::size_t best_candidate_index(std::span<const EigenCandidate> candidates) {
    if (candidates.empty()) throw Error(ErrorCode::NoViableCandidate, "no candidates");
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        const auto& b = candidates[best];
        if (c.in_sample_sharpe > b.in_sample_sharpe ||
            (c.in_sample_sharpe == b.in_sample_sharpe && c.component_index < b.component_index)) {
            best = i;
        }
    }
    return best;
}

EigenSelection select_best_eigen(const ReturnsMatrix& returns, const PcaModel& model,
                                 std::size_t k_max, double risk_free) {
    if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "k_max must be at least 1");
    if (model.tickers != returns.tickers) {
        throw Error(ErrorCode::TickerMismatch, "PCA model and returns cover different tickers");
    }
    k_max = std::min<std::size_t>(k_max, static_cast<std::size_t>(model.loadings.cols()));

    EigenSelection out;
    for (std::size_t k = 1; k <= k_max; ++k) {
        try {
            EigenCandidate c;
            c.component_index = k;
            c.weights = candidate_weights(model, k);
            const Eigen::VectorXd w =
                Eigen::Map<const Eigen::VectorXd>(c.weights.data(), static_cast<Eigen::Index>(c.weights.size()));
            const Eigen::VectorXd series = kernels::parallel::weighted_rows(returns.values, w);
            c.in_sample_sharpe =
                sharpe_ratio(std::span<const double>(series.data(), static_cast<std::size_t>(series.size())),
                             risk_free)
                    .sharpe_ratio;
            out.candidates.push_back(std::move(c));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateLoadingSum && e.code() != ErrorCode::ZeroVolatility) throw;
            out.skipped.push_back("component " + std::to_string(k) + ": " + e.what());
        }
    }
    if (out.candidates.empty()) {
        throw Error(ErrorCode::NoViableCandidate,
                    "all " + std::to_string(k_max) + " eigen candidates are degenerate");
    }

    const auto& best = out.candidates[best_candidate_index(out.candidates)];
    out.best.tickers = returns.tickers;
    out.best.weights = best.weights;
    out.best.method = Method::Eigen;
    if (!returns.dates.empty()) out.best.built_on = returns.dates.back();
    out.best.metadata["component_index"] = std::to_string(best.component_index);
    out.best.metadata["candidate_sharpe"] = format_double(best.in_sample_sharpe);
    out.best.metadata["components_considered"] = std::to_string(k_max);
    out.best.metadata["standardized"] = model.standardized ? "true" : "false";
    out.best.metadata["risk_free"] = format_double(risk_free);
    out.best.metadata["skipped_components"] = std::to_string(out.skipped.size());

    std::stable_sort(out.candidates.begin(), out.candidates.end(), [](const auto& a, const auto& b) {
        if (a.in_sample_sharpe != b.in_sample_sharpe) return a.in_sample_sharpe > b.in_sample_sharpe;
        return a.component_index < b.component_index;
    });
    return out;
}

}  // namespace pfolio
