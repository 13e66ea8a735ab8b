// ADASYN oversampling of the minority class in a training partition.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cgpclf/common.hpp"
#include "cgpclf/dataset.hpp"

namespace cgpclf {

struct AdasynConfig {
    std::size_t k_neighbors = 5;
    double beta = 1.0;  // 1 = full balance
    std::uint64_t seed = 0;
    bool normalize = false;  // z-score features for the neighbour searches only

    void validate() const {
        if (k_neighbors == 0) throw Error(ErrorCode::InvalidConfig, "k_neighbors must be at least 1");
        if (!(beta >= 0.0 && beta <= 1.0)) throw Error(ErrorCode::InvalidConfig, "beta must lie in [0, 1]");
    }
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) d += (a[j] - b[j]) * (a[j] - b[j]);
    return d;
}

/// Exact Euclidean k nearest neighbours of `query` in `pool`, nearest first,
/// ties going to the lower index. `exclude` removes the query's own entry
/// when it is a pool member.
inline std::vector<std::size_t> knn(std::span<const double> query, std::span<const std::vector<double>> pool,
                                    std::size_t k, std::optional<std::size_t> exclude = std::nullopt) {
    const std::size_t available = pool.size() - (exclude && *exclude < pool.size() ? 1 : 0);
    if (available < k)
        throw Error(ErrorCode::PoolTooSmall, "pool has " + std::to_string(available) + " candidates, need " +
                                                 std::to_string(k));
    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(available);
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (!exclude || i != *exclude) cand.emplace_back(squared_distance(query, pool[i]), i);
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = cand[i].second;
    return out;
}

/// Splits `total` into integer shares proportional to `weights` (which sum
/// to 1). Floors first, then the largest fractional remainders receive one
/// more each, ties to the lower index. The shares always sum to `total`.
inline std::vector<std::size_t> largest_remainder(std::span<const double> weights, std::size_t total) {
    const std::size_t n = weights.size();
    std::vector<std::size_t> share(n, 0);
    if (n == 0) return share;
    std::vector<double> frac(n);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double q = weights[i] * static_cast<double>(total);
        share[i] = static_cast<std::size_t>(std::floor(q));
        frac[i] = q - std::floor(q);
        assigned += share[i];
    }
    while (assigned > total) {  // only reachable through rounding noise
        auto it = std::max_element(share.begin(), share.end());
        --*it;
        --assigned;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (std::size_t r = 0; assigned < total; r = (r + 1) % n, ++assigned) ++share[order[r]];
    return share;
}

/// Per-minority-point quantities driving generation.
struct AdasynPlan {
    int minority_label = 1;
    std::size_t minority_count = 0;
    std::size_t majority_count = 0;
    std::size_t total = 0;                  // G
    std::size_t density_k = 0;              // K used for r_i
    std::size_t minority_k = 0;             // K used to draw interpolation partners
    std::vector<std::size_t> minority;      // dataset indices of minority points
    std::vector<double> ratio;              // r_i
    std::vector<double> weight;             // normalised r_i
    std::vector<std::size_t> count;         // g_i
    std::vector<std::vector<std::size_t>> partners;  // minority-only neighbours (indices into `minority`)
    bool uniform_fallback = false;
};

namespace detail {

inline std::vector<std::vector<double>> search_space(const Dataset& data, bool normalize) {
    std::vector<std::vector<double>> pts;
    pts.reserve(data.size());
    for (const auto& s : data.samples()) pts.push_back(s.features);
    if (!normalize || pts.empty()) return pts;
    const std::size_t d = data.n_features();
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (const auto& p : pts) mean += p[j];
        mean /= static_cast<double>(pts.size());
        double var = 0.0;
        for (const auto& p : pts) var += (p[j] - mean) * (p[j] - mean);
        const double sd = std::sqrt(var / static_cast<double>(pts.size()));
        for (auto& p : pts) p[j] = sd > 0.0 ? (p[j] - mean) / sd : 0.0;
    }
    return pts;
}

}  // namespace detail

inline AdasynPlan adasyn_plan(const Dataset& train, const AdasynConfig& config) {
    config.validate();
    if (train.role() == Role::Validation || train.role() == Role::Test)
        throw Error(ErrorCode::LeakageGuard, "oversampling is only allowed on training partitions, got " +
                                                 std::string(role_name(train.role())));
    const std::size_t ones = train.count(1), zeros = train.count(0);
    if (ones == 0 || zeros == 0) throw Error(ErrorCode::SingleClass, "both classes must be present");

    AdasynPlan plan;
    plan.minority_label = ones <= zeros ? 1 : 0;
    plan.minority_count = std::min(ones, zeros);
    plan.majority_count = std::max(ones, zeros);
    if (plan.minority_count < 2)
        throw Error(ErrorCode::MinorityTooSmall, "minority class has " + std::to_string(plan.minority_count) +
                                                     " samples, need 2");
    plan.total = static_cast<std::size_t>(
        std::llround(static_cast<double>(plan.majority_count - plan.minority_count) * config.beta));

    for (std::size_t i = 0; i < train.size(); ++i)
        if (train[i].label == plan.minority_label) plan.minority.push_back(i);

    const auto pts = detail::search_space(train, config.normalize);
    const std::size_t m = plan.minority.size();
    plan.density_k = std::min(config.k_neighbors, train.size() - 1);
    plan.minority_k = std::min(config.k_neighbors, m - 1);

    plan.ratio.resize(m);
    for (std::size_t a = 0; a < m; ++a) {
        const auto i = plan.minority[a];
        const auto nn = knn(pts[i], pts, plan.density_k, i);
        const auto majority = std::count_if(nn.begin(), nn.end(),
                                            [&](std::size_t j) { return train[j].label != plan.minority_label; });
        plan.ratio[a] = static_cast<double>(majority) / static_cast<double>(plan.density_k);
    }
    const double sum = std::accumulate(plan.ratio.begin(), plan.ratio.end(), 0.0);
    plan.weight.resize(m);
    plan.uniform_fallback = !(sum > 0.0);
    for (std::size_t a = 0; a < m; ++a)
        plan.weight[a] = plan.uniform_fallback ? 1.0 / static_cast<double>(m) : plan.ratio[a] / sum;
    plan.count = largest_remainder(plan.weight, plan.total);

    std::vector<std::vector<double>> minority_pts;
    minority_pts.reserve(m);
    for (auto i : plan.minority) minority_pts.push_back(pts[i]);
    plan.partners.resize(m);
    for (std::size_t a = 0; a < m; ++a) plan.partners[a] = knn(minority_pts[a], minority_pts, plan.minority_k, a);
    return plan;
}

struct Provenance {
    std::size_t seed_index = 0;  // position of the base point among minority samples
    std::string base_id;
    std::string neighbor_id;
    double lambda = 0.0;
};

struct SyntheticSample {
    Sample sample;
    Provenance provenance;
};

struct BalancedSet {
    Dataset original;
    std::vector<SyntheticSample> synthetic;
    int minority_label = 1;

    /// Original samples followed by the synthetic ones, as a training set.
    Dataset merged() const {
        std::vector<Sample> all(original.samples().begin(), original.samples().end());
        for (const auto& s : synthetic) all.push_back(s.sample);
        return Dataset(std::move(all), original.n_features(), original.layout(), Role::Train);
    }

    std::vector<bool> synthetic_mask() const {
        std::vector<bool> mask(original.size(), false);
        mask.resize(original.size() + synthetic.size(), true);
        return mask;
    }
};

/// Generates round((majority - minority) * beta) minority samples. Each
/// minority point x_i receives g_i samples x_i + lambda * (x_z - x_i), with
/// x_z drawn uniformly from its minority neighbours and lambda ~ U(0, 1).
inline BalancedSet adasyn_balance(const Dataset& train, const AdasynConfig& config) {
    const auto plan = adasyn_plan(train, config);
    BalancedSet out{train, {}, plan.minority_label};
    Rng rng(config.seed);
    std::size_t serial = 0;
    for (std::size_t a = 0; a < plan.minority.size(); ++a) {
        const auto& base = train[plan.minority[a]];
        for (std::size_t k = 0; k < plan.count[a]; ++k) {
            const auto z = plan.partners[a][uniform_index(rng, plan.partners[a].size())];
            const auto& partner = train[plan.minority[z]];
            const double lambda = uniform01(rng);
            SyntheticSample s;
            s.sample.id = base.id + "#syn" + std::to_string(serial++);
            s.sample.group = base.group;
            s.sample.label = plan.minority_label;
            s.sample.features.resize(base.features.size());
            for (std::size_t j = 0; j < base.features.size(); ++j)
                s.sample.features[j] = base.features[j] + lambda * (partner.features[j] - base.features[j]);
            s.provenance = {a, base.id, partner.id, lambda};
            out.synthetic.push_back(std::move(s));
        }
    }
    return out;
}

}  // namespace cgpclf
