#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pfolio/portfolio.hpp"
#include "pfolio/returns_stats.hpp"

namespace pfolio {

enum class DistanceMode {
    SqrtHalf,          ///< d = sqrt((1 - rho) / 2)
    EuclideanReturns,  ///< Euclidean distance between z-scored return columns
};

enum class LinkageMethod { Ward, Single, Complete, Average };

std::string_view to_string(DistanceMode mode) noexcept;
std::string_view to_string(LinkageMethod method) noexcept;
std::optional<DistanceMode> parse_distance_mode(std::string_view text) noexcept;
std::optional<LinkageMethod> parse_linkage_method(std::string_view text) noexcept;

struct DistanceMatrix {
    std::vector<std::string> tickers;
    Eigen::MatrixXd values;
};

/// One agglomeration step. Leaves are 0..N-1; the cluster created by row k
/// has id N+k. `left < right` always.
struct LinkageRow {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;
    std::size_t size = 0;

    bool operator==(const LinkageRow&) const = default;
};

struct LinkageTree {
    std::size_t leaf_count = 0;
    std::vector<LinkageRow> rows;
};

struct SeriationOrder {
    std::vector<std::size_t> order;
};

struct HrpConfig {
    DistanceMode distance = DistanceMode::SqrtHalf;
    LinkageMethod linkage = LinkageMethod::Ward;
};

struct HrpResult {
    PortfolioWeights weights;
    LinkageTree tree;
    SeriationOrder order;
    DistanceMatrix distance;
    CovarianceMatrix covariance;
};

DistanceMatrix correlation_distance(const CorrelationMatrix& corr);
DistanceMatrix euclidean_return_distance(const ReturnsMatrix& returns);

/// Agglomerative clustering with the Lance-Williams update for `method`.
/// Exactly tied distances merge the lexicographically smallest id pair first.
LinkageTree hierarchical_linkage(const DistanceMatrix& dist, LinkageMethod method);

inline LinkageTree ward_linkage(const DistanceMatrix& dist) {
    return hierarchical_linkage(dist, LinkageMethod::Ward);
}

/// Throws MalformedTree unless the rows form one binary tree over all leaves.
void validate_tree(const LinkageTree& tree);

/// Leaf order obtained by expanding the root in place until only leaves remain.
SeriationOrder quasi_diagonalize(const LinkageTree& tree);

/// Leaf groups obtained by undoing the last `clusters - 1` merges, each group
/// in seriation order. Groups are ordered by their first leaf in the seriation.
std::vector<std::vector<std::size_t>> cut_tree(const LinkageTree& tree, std::size_t clusters);

std::vector<double> inverse_variance_weights(const CovarianceMatrix& cov,
                                             std::span<const std::size_t> subset);

/// Variance of the inverse-variance allocation of `subset`.
double cluster_variance(const CovarianceMatrix& cov, std::span<const std::size_t> subset);

/// Top-down bisection of the seriated list. Each slice is split at its
/// midpoint and the halves share the parent weight in inverse proportion to
/// their cluster variances.
PortfolioWeights recursive_bisection(const CovarianceMatrix& cov, const SeriationOrder& order);

/// covariance -> correlation -> distance -> linkage -> seriation -> bisection.
HrpResult build_hrp_portfolio(const ReturnsMatrix& returns, const HrpConfig& config = {});

}  // namespace pfolio
