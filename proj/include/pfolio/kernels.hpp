#pragma once

// Data-parallel inner loops. Each kernel has a straight serial reference and an
// OpenMP version; both produce bit-identical results because every output
// element is reduced in the same order in both paths.

#include <Eigen/Dense>
#include <cstddef>
#include <span>

namespace pfolio::kernels {

/// Closest active pair found by the agglomeration search.
struct ClosestPair {
    std::size_t slot_a = 0;  ///< slot holding the lower cluster id
    std::size_t slot_b = 0;
    double distance = 0.0;
};

namespace serial {

/// Sample covariance (n-1 divisor) of the columns of `x` (rows = observations).
Eigen::MatrixXd covariance(const Eigen::MatrixXd& x);

/// Scans the strict upper triangle of `dist` over the active slots. Ties are
/// broken by the (lower id, higher id) pair of `ids`.
ClosestPair closest_pair(const Eigen::MatrixXd& dist, std::span<const std::size_t> active,
                         std::span<const std::size_t> ids);

/// r(t) = sum_i x(t, i) * w(i).
Eigen::VectorXd weighted_rows(const Eigen::MatrixXd& x, const Eigen::VectorXd& w);

/// Euclidean distance between every pair of columns of `x`.
Eigen::MatrixXd pairwise_column_distance(const Eigen::MatrixXd& x);

}  // namespace serial

namespace parallel {

Eigen::MatrixXd covariance(const Eigen::MatrixXd& x);

ClosestPair closest_pair(const Eigen::MatrixXd& dist, std::span<const std::size_t> active,
                         std::span<const std::size_t> ids);

Eigen::VectorXd weighted_rows(const Eigen::MatrixXd& x, const Eigen::VectorXd& w);

Eigen::MatrixXd pairwise_column_distance(const Eigen::MatrixXd& x);

}  // namespace parallel

}  // namespace pfolio::kernels
