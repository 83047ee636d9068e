#include "pfolio/kernels.hpp"

#include <cmath>
#include <limits>
#include <omp.h>
#include <utility>

namespace pfolio::kernels {

namespace {

// Below these sizes the fork/join overhead dominates.
constexpr Eigen::Index kParallelCovarianceWork = 1 << 14;
constexpr std::size_t kParallelPairSlots = 64;
constexpr Eigen::Index kParallelRows = 4096;

Eigen::VectorXd column_means(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    Eigen::VectorXd mean(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        double s = 0.0;
        for (Eigen::Index t = 0; t < n; ++t) s += x(t, j);
        mean(j) = s / static_cast<double>(n);
    }
    return mean;
}

double column_distance(const Eigen::MatrixXd& x, Eigen::Index i, Eigen::Index j) {
    double s = 0.0;
    for (Eigen::Index t = 0; t < x.rows(); ++t) {
        const double diff = x(t, i) - x(t, j);
        s += diff * diff;
    }
    return std::sqrt(s);
}

double centred_dot(const Eigen::MatrixXd& x, const Eigen::VectorXd& mean, Eigen::Index i,
                   Eigen::Index j) {
    double s = 0.0;
    for (Eigen::Index t = 0; t < x.rows(); ++t) s += (x(t, i) - mean(i)) * (x(t, j) - mean(j));
    return s;
}

/// Strict total order on candidate merges: distance, then (lo id, hi id).
bool better(double d, std::size_t lo, std::size_t hi, double best_d, std::size_t best_lo,
            std::size_t best_hi) {
    if (d != best_d) return d < best_d;
    if (lo != best_lo) return lo < best_lo;
    return hi < best_hi;
}

struct Candidate {
    double d = std::numeric_limits<double>::infinity();
    std::size_t lo = std::numeric_limits<std::size_t>::max();
    std::size_t hi = std::numeric_limits<std::size_t>::max();
    std::size_t slot_lo = 0;
    std::size_t slot_hi = 0;
    bool found = false;

    void offer(double dist, std::size_t slot_a, std::size_t slot_b, std::size_t id_a,
               std::size_t id_b) {
        std::size_t l = id_a, h = id_b, sl = slot_a, sh = slot_b;
        if (h < l) {
            std::swap(l, h);
            std::swap(sl, sh);
        }
        if (!found || better(dist, l, h, d, lo, hi)) {
            d = dist;
            lo = l;
            hi = h;
            slot_lo = sl;
            slot_hi = sh;
            found = true;
        }
    }
};

}  // namespace

namespace serial {

Eigen::MatrixXd covariance(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.cols();
    const double denom = static_cast<double>(x.rows() - 1);
    const Eigen::VectorXd mean = column_means(x);
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = centred_dot(x, mean, i, j) / denom;
            cov(i, j) = v;
            cov(j, i) = v;
        }
    }
    return cov;
}

ClosestPair closest_pair(const Eigen::MatrixXd& dist, std::span<const std::size_t> active,
                         std::span<const std::size_t> ids) {
    Candidate best;
    for (std::size_t a = 0; a < active.size(); ++a) {
        for (std::size_t b = a + 1; b < active.size(); ++b) {
            const auto sa = active[a], sb = active[b];
            best.offer(dist(static_cast<Eigen::Index>(sa), static_cast<Eigen::Index>(sb)), sa, sb,
                       ids[sa], ids[sb]);
        }
    }
    return {best.slot_lo, best.slot_hi, best.d};
}

Eigen::VectorXd weighted_rows(const Eigen::MatrixXd& x, const Eigen::VectorXd& w) {
    Eigen::VectorXd r(x.rows());
    for (Eigen::Index t = 0; t < x.rows(); ++t) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < x.cols(); ++i) s += x(t, i) * w(i);
        r(t) = s;
    }
    return r;
}

Eigen::MatrixXd pairwise_column_distance(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.cols();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            d(i, j) = column_distance(x, i, j);
            d(j, i) = d(i, j);
        }
    }
    return d;
}

}  // namespace serial

namespace parallel {

Eigen::MatrixXd covariance(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.cols();
    const double denom = static_cast<double>(x.rows() - 1);
    const Eigen::VectorXd mean = column_means(x);
    Eigen::MatrixXd cov(n, n);
    const bool go_parallel = n * n * x.rows() / 2 >= kParallelCovarianceWork;
#pragma omp parallel for schedule(dynamic, 4) if (go_parallel)
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = centred_dot(x, mean, i, j) / denom;
            cov(i, j) = v;
            cov(j, i) = v;
        }
    }
    return cov;
}

ClosestPair closest_pair(const Eigen::MatrixXd& dist, std::span<const std::size_t> active,
                         std::span<const std::size_t> ids) {
    Candidate best;
    const auto m = static_cast<std::ptrdiff_t>(active.size());
#pragma omp parallel if (active.size() >= kParallelPairSlots)
    {
        Candidate local;
#pragma omp for schedule(dynamic, 8) nowait
        for (std::ptrdiff_t a = 0; a < m; ++a) {
            for (std::ptrdiff_t b = a + 1; b < m; ++b) {
                const auto sa = active[static_cast<std::size_t>(a)];
                const auto sb = active[static_cast<std::size_t>(b)];
                local.offer(dist(static_cast<Eigen::Index>(sa), static_cast<Eigen::Index>(sb)), sa,
                            sb, ids[sa], ids[sb]);
            }
        }
#pragma omp critical(pfolio_closest_pair)
        {
            if (local.found) best.offer(local.d, local.slot_lo, local.slot_hi, local.lo, local.hi);
        }
    }
    return {best.slot_lo, best.slot_hi, best.d};
}

Eigen::VectorXd weighted_rows(const Eigen::MatrixXd& x, const Eigen::VectorXd& w) {
    Eigen::VectorXd r(x.rows());
#pragma omp parallel for schedule(static) if (x.rows() >= kParallelRows)
    for (Eigen::Index t = 0; t < x.rows(); ++t) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < x.cols(); ++i) s += x(t, i) * w(i);
        r(t) = s;
    }
    return r;
}

Eigen::MatrixXd pairwise_column_distance(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.cols();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 4) if (n * n * x.rows() / 2 >= kParallelCovarianceWork)
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            d(i, j) = column_distance(x, i, j);
            d(j, i) = d(i, j);
        }
    }
    return d;
}

}  // namespace parallel

}  // namespace pfolio::kernels
