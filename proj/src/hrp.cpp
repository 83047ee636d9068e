#include "pfolio/hrp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "pfolio/error.hpp"
#include "pfolio/kernels.hpp"

namespace pfolio {

namespace {

using Idx = Eigen::Index;

Idx ix(std::size_t i) { return static_cast<Idx>(i); }

double lance_williams(LinkageMethod method, double d_ik, double d_jk, double d_ij, double n_i,
                      double n_j, double n_k) {
    switch (method) {
        case LinkageMethod::Ward: {
            const double num = (n_i + n_k) * d_ik * d_ik + (n_j + n_k) * d_jk * d_jk -
                               n_k * d_ij * d_ij;
            return std::sqrt(std::max(0.0, num / (n_i + n_j + n_k)));
        }
        case LinkageMethod::Single: return std::min(d_ik, d_jk);
        case LinkageMethod::Complete: return std::max(d_ik, d_jk);
        case LinkageMethod::Average: return (n_i * d_ik + n_j * d_jk) / (n_i + n_j);
    }
    return 0.0;
}

void check_subset(const CovarianceMatrix& cov, std::span<const std::size_t> subset) {
    if (subset.empty()) throw Error(ErrorCode::InvalidArgument, "empty asset subset");
    const auto n = static_cast<std::size_t>(cov.values.rows());
    for (auto i : subset) {
        if (i >= n) throw Error(ErrorCode::InvalidArgument, "asset index out of range");
        const double v = cov.values(ix(i), ix(i));
        if (!(v > kVarianceFloor)) {
            throw Error(ErrorCode::ZeroVarianceAsset,
                        (i < cov.tickers.size() ? cov.tickers[i] : std::to_string(i)) +
                            " has variance " + std::to_string(v));
        }
    }
}

std::string join_tickers(const std::vector<std::string>& tickers,
                         const std::vector<std::size_t>& order) {
    std::string out;
    for (auto i : order) {
        if (!out.empty()) out += ';';
        out += tickers[i];
    }
    return out;
}

}  // namespace

std::string_view to_string(DistanceMode mode) noexcept {
    return mode == DistanceMode::SqrtHalf ? "sqrt_half" : "euclidean_returns";
}

std::string_view to_string(LinkageMethod method) noexcept {
    switch (method) {
        case LinkageMethod::Ward: return "ward";
        case LinkageMethod::Single: return "single";
        case LinkageMethod::Complete: return "complete";
        case LinkageMethod::Average: return "average";
    }
    return "ward";
}

std::optional<DistanceMode> parse_distance_mode(std::string_view text) noexcept {
    if (text == "sqrt_half") return DistanceMode::SqrtHalf;
    if (text == "euclidean_returns") return DistanceMode::EuclideanReturns;
    return std::nullopt;
}

std::optional<LinkageMethod> parse_linkage_method(std::string_view text) noexcept {
    for (auto m : {LinkageMethod::Ward, LinkageMethod::Single, LinkageMethod::Complete,
                   LinkageMethod::Average}) {
        if (text == to_string(m)) return m;
    }
    return std::nullopt;
}

DistanceMatrix correlation_distance(const CorrelationMatrix& corr) {
    const Idx n = corr.values.rows();
    DistanceMatrix out{corr.tickers, Eigen::MatrixXd::Zero(n, n)};
    for (Idx i = 0; i < n; ++i) {
        for (Idx j = i + 1; j < n; ++j) {
            const double d = std::sqrt(std::max(0.0, (1.0 - corr.values(i, j)) / 2.0));
            out.values(i, j) = d;
            out.values(j, i) = d;
        }
    }
    return out;
}

DistanceMatrix euclidean_return_distance(const ReturnsMatrix& returns) {
    return {returns.tickers, kernels::parallel::pairwise_column_distance(standardized_columns(returns))};
}

LinkageTree hierarchical_linkage(const DistanceMatrix& dist, LinkageMethod method) {
    const auto n = static_cast<std::size_t>(dist.values.rows());
    if (n < 2 || dist.values.cols() != dist.values.rows()) {
        throw Error(ErrorCode::InvalidArgument, "linkage needs a square matrix over >= 2 points");
    }

    Eigen::MatrixXd d = dist.values;
    std::vector<std::size_t> ids(n), sizes(n, 1), active(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::iota(active.begin(), active.end(), 0);

    LinkageTree tree{n, {}};
    tree.rows.reserve(n - 1);
    for (std::size_t step = 0; step + 1 < n; ++step) {
        const auto best = kernels::parallel::closest_pair(d, active, ids);
        const std::size_t keep = best.slot_a, drop = best.slot_b;
        const double n_i = static_cast<double>(sizes[keep]);
        const double n_j = static_cast<double>(sizes[drop]);

        tree.rows.push_back({ids[keep], ids[drop], best.distance, sizes[keep] + sizes[drop]});

        active.erase(std::find(active.begin(), active.end(), drop));
        for (auto k : active) {
            if (k == keep) continue;
            const double updated =
                lance_williams(method, d(ix(keep), ix(k)), d(ix(drop), ix(k)), best.distance, n_i,
                               n_j, static_cast<double>(sizes[k]));
            d(ix(keep), ix(k)) = updated;
            d(ix(k), ix(keep)) = updated;
        }
        ids[keep] = n + step;
        sizes[keep] += sizes[drop];
    }
    return tree;
}

void validate_tree(const LinkageTree& tree) {
    const std::size_t n = tree.leaf_count;
    if (n == 0) throw Error(ErrorCode::MalformedTree, "tree has no leaves");
    if (tree.rows.size() + 1 != n) {
        throw Error(ErrorCode::MalformedTree, std::to_string(tree.rows.size()) + " rows for " +
                                                  std::to_string(n) + " leaves");
    }
    std::vector<std::size_t> size_of(2 * n - 1, 0);
    std::vector<bool> used(2 * n - 1, false);
    std::fill(size_of.begin(), size_of.begin() + static_cast<std::ptrdiff_t>(n), 1);
    for (std::size_t k = 0; k < tree.rows.size(); ++k) {
        const auto& row = tree.rows[k];
        for (auto child : {row.left, row.right}) {
            if (child >= n + k) {
                throw Error(ErrorCode::MalformedTree,
                            "row " + std::to_string(k) + " references undefined id " +
                                std::to_string(child));
            }
            if (used[child]) {
                throw Error(ErrorCode::MalformedTree, "id " + std::to_string(child) + " merged twice");
            }
            used[child] = true;
        }
        if (row.left == row.right) throw Error(ErrorCode::MalformedTree, "self merge");
        if (row.size != size_of[row.left] + size_of[row.right]) {
            throw Error(ErrorCode::MalformedTree, "row " + std::to_string(k) + " size mismatch");
        }
        size_of[n + k] = row.size;
    }
}

SeriationOrder quasi_diagonalize(const LinkageTree& tree) {
    validate_tree(tree);
    const std::size_t n = tree.leaf_count;
    SeriationOrder out;
    out.order.reserve(n);
    if (n == 1) {
        out.order.push_back(0);
        return out;
    }
    // Depth-first, left child first: the same sequence as repeatedly replacing
    // every cluster id by its (left, right) pair in place.
    std::vector<std::size_t> stack{n + tree.rows.size() - 1};
    while (!stack.empty()) {
        const auto id = stack.back();
        stack.pop_back();
        if (id < n) {
            out.order.push_back(id);
            continue;
        }
        const auto& row = tree.rows[id - n];
        stack.push_back(row.right);
        stack.push_back(row.left);
    }
    return out;
}

std::vector<std::vector<std::size_t>> cut_tree(const LinkageTree& tree, std::size_t clusters) {
    validate_tree(tree);
    const std::size_t n = tree.leaf_count;
    if (clusters == 0 || clusters > n) {
        throw Error(ErrorCode::InvalidArgument, "cluster count must be in [1, N]");
    }
    std::vector<std::size_t> parent(2 * n - 1);
    std::iota(parent.begin(), parent.end(), 0);
    for (std::size_t k = 0; k + clusters < n; ++k) {
        parent[tree.rows[k].left] = n + k;
        parent[tree.rows[k].right] = n + k;
    }
    auto root_of = [&](std::size_t id) {
        while (parent[id] != id) id = parent[id];
        return id;
    };

    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::size_t> group_roots;
    for (auto leaf : quasi_diagonalize(tree).order) {
        const auto r = root_of(leaf);
        auto it = std::find(group_roots.begin(), group_roots.end(), r);
        if (it == group_roots.end()) {
            group_roots.push_back(r);
            groups.push_back({leaf});
        } else {
            groups[static_cast<std::size_t>(it - group_roots.begin())].push_back(leaf);
        }
    }
    return groups;
}

std::vector<double> inverse_variance_weights(const CovarianceMatrix& cov,
                                             std::span<const std::size_t> subset) {
    check_subset(cov, subset);
    std::vector<double> w(subset.size());
    double total = 0.0;
    for (std::size_t k = 0; k < subset.size(); ++k) {
        w[k] = 1.0 / cov.values(ix(subset[k]), ix(subset[k]));
        total += w[k];
    }
    for (auto& x : w) x /= total;
    return w;
}

double cluster_variance(const CovarianceMatrix& cov, std::span<const std::size_t> subset) {
    const auto w = inverse_variance_weights(cov, subset);
    double var = 0.0;
    for (std::size_t a = 0; a < subset.size(); ++a) {
        for (std::size_t b = 0; b < subset.size(); ++b) {
            var += w[a] * cov.values(ix(subset[a]), ix(subset[b])) * w[b];
        }
    }
    return var;
}

PortfolioWeights recursive_bisection(const CovarianceMatrix& cov, const SeriationOrder& order) {
    const auto n = static_cast<std::size_t>(cov.values.rows());
    {
        std::vector<bool> seen(n, false);
        if (order.order.size() != n) {
            throw Error(ErrorCode::InvalidArgument, "seriation order does not cover the covariance");
        }
        for (auto i : order.order) {
            if (i >= n || seen[i]) throw Error(ErrorCode::InvalidArgument, "order is not a permutation");
            seen[i] = true;
        }
    }

    std::vector<double> w(n, 1.0);
    std::size_t degenerate_splits = 0;
    std::deque<std::pair<std::size_t, std::size_t>> work{{0, n}};
    const std::span<const std::size_t> seq(order.order);
    while (!work.empty()) {
        const auto [begin, end] = work.front();
        work.pop_front();
        const std::size_t len = end - begin;
        if (len < 2) continue;
        const std::size_t mid = begin + len / 2;
        const auto left = seq.subspan(begin, mid - begin);
        const auto right = seq.subspan(mid, end - mid);
        const double var_left = cluster_variance(cov, left);
        const double var_right = cluster_variance(cov, right);

        double alpha = 0.5;
        if (var_left + var_right > kVarianceFloor) {
            alpha = 1.0 - var_left / (var_left + var_right);
        } else {
            ++degenerate_splits;
        }
        for (auto i : left) w[i] *= alpha;
        for (auto i : right) w[i] *= 1.0 - alpha;
        work.emplace_back(begin, mid);
        work.emplace_back(mid, end);
    }

    PortfolioWeights out;
    out.tickers = cov.tickers;
    out.weights = std::move(w);
    out.method = Method::Hrp;
    out.metadata["bisection"] = "top_down_midpoint";
    out.metadata["degenerate_splits"] = std::to_string(degenerate_splits);
    return out;
}

HrpResult build_hrp_portfolio(const ReturnsMatrix& returns, const HrpConfig& config) {
    if (returns.num_assets() < 2) {
        throw Error(ErrorCode::InvalidArgument, "HRP needs at least two assets");
    }
    HrpResult out;
    out.covariance = sample_covariance(returns);
    const CorrelationMatrix corr = correlation(out.covariance);
    out.distance = config.distance == DistanceMode::SqrtHalf ? correlation_distance(corr)
                                                             : euclidean_return_distance(returns);
    out.tree = hierarchical_linkage(out.distance, config.linkage);
    out.order = quasi_diagonalize(out.tree);
    out.weights = recursive_bisection(out.covariance, out.order);
    if (!returns.dates.empty()) out.weights.built_on = returns.dates.back();
    out.weights.metadata["linkage"] = std::string(to_string(config.linkage));
    out.weights.metadata["distance"] = std::string(to_string(config.distance));
    out.weights.metadata["covariance"] = "sample_n_minus_1";
    out.weights.metadata["seriation"] = join_tickers(returns.tickers, out.order.order);
    return out;
}

}  // namespace pfolio
