#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "pfolio/portfolio.hpp"
#include "pfolio/returns_stats.hpp"

namespace pfolio {

/// Principal components of a return panel, largest first.
///
/// Column k of `loadings` is the unit eigenvector for `eigenvalues(k)`,
/// oriented so that its entry of largest magnitude is positive.
struct PcaModel {
    std::vector<std::string> tickers;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd loadings;
    Eigen::VectorXd explained_ratio;
    bool standardized = true;
};

struct EigenCandidate {
    std::size_t component_index = 0;  ///< 1-based
    std::vector<double> weights;
    double in_sample_sharpe = 0.0;
};

struct EigenConfig {
    bool standardize = true;
    double variance_threshold = 0.8;
};

struct EigenSelection {
    PortfolioWeights best;
    /// Viable candidates ranked by Sharpe, best first.
    std::vector<EigenCandidate> candidates;
    /// One line per component that could not form a portfolio.
    std::vector<std::string> skipped;
};

/// Eigendecomposition of a symmetric matrix sorted by descending eigenvalue,
/// with the sign rule and clamping described on PcaModel.
PcaModel pca_from_matrix(std::vector<std::string> tickers, const Eigen::MatrixXd& symmetric,
                         bool standardized);

/// PCA of the correlation matrix (standardize = true) or covariance matrix.
PcaModel fit_pca(const ReturnsMatrix& returns, bool standardize);

/// Smallest k whose cumulative explained ratio reaches `threshold`.
std::size_t min_components_for_variance(const PcaModel& model, double threshold);

/// Loadings of component `component_index` (1-based) normalized to sum to one.
/// Throws DegenerateLoadingSum when the loadings sum to (nearly) zero.
std::vector<double> candidate_weights(const PcaModel& model, std::size_t component_index);

/// Index of the highest-Sharpe candidate; ties go to the lower component index.
std::size_t best_candidate_index(std::span<const EigenCandidate> candidates);

/// Builds candidates 1..k_max, scores each by in-sample Sharpe on `returns`,
/// and returns the best as an EIGEN portfolio.
EigenSelection select_best_eigen(const ReturnsMatrix& returns, const PcaModel& model,
                                 std::size_t k_max, double risk_free = 0.0);

}  // namespace pfolio
