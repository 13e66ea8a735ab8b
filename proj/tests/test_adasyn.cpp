#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "cgpclf/adasyn.hpp"
#include "cgpclf/datagen.hpp"
#include "helpers.hpp"

using namespace cgpclf;

namespace {

Dataset from_points(const std::vector<std::vector<double>>& ones, const std::vector<std::vector<double>>& zeros,
                    Role role = Role::Train) {
    std::vector<Sample> s;
    for (std::size_t i = 0; i < ones.size(); ++i) s.push_back({"p" + std::to_string(i), "", 1, ones[i]});
    for (std::size_t i = 0; i < zeros.size(); ++i) s.push_back({"n" + std::to_string(i), "", 0, zeros[i]});
    return Dataset(std::move(s), ones.front().size(), LayoutDescriptor::generic(), role);
}

Dataset toy() {
    return from_points({{0, 0}, {1, 0}, {0, 1}, {10, 10}},
                       {{11, 10}, {10, 11}, {9, 10}, {10, 9}, {30, 30}, {31, 30}, {30, 31}, {31, 31}});
}

Dataset imbalanced_39_111(std::uint64_t seed) {
    GeneratorSpec spec;
    spec.seed = seed;
    return generate(spec).with_role(Role::Train);
}

}  // namespace

TEST(Knn, SmallExampleAndTies) {
    const std::vector<std::vector<double>> pool{{0, 0}, {3, 0}, {1, 0}, {-1, 0}, {5, 5}};
    const std::vector<double> q{0, 0};
    EXPECT_EQ(knn(q, pool, 1, 0), (std::vector<std::size_t>{2}));
    // Indices 2 and 3 are both at distance 1; the lower index comes first.
    EXPECT_EQ(knn(q, pool, 3, 0), (std::vector<std::size_t>{2, 3, 1}));
    EXPECT_EQ(knn(q, pool, 2), (std::vector<std::size_t>{0, 2}));
    EXPECT_THROW(knn(q, pool, 5, 0), Error);
    EXPECT_NO_THROW(knn(q, pool, 5));
}

TEST(Knn, MatchesBruteForceSort) {
    Rng rng(17);
    std::vector<std::vector<double>> pool(200, std::vector<double>(3));
    for (auto& p : pool)
        for (auto& v : p) v = std::round(standard_normal(rng) * 4.0);  // rounding forces ties
    for (std::size_t q = 0; q < pool.size(); q += 7) {
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (i != q) order.push_back(i);
        auto dist = [&](std::size_t i) {
            double d = 0;
            for (int j = 0; j < 3; ++j) d += (pool[i][j] - pool[q][j]) * (pool[i][j] - pool[q][j]);
            return d;
        };
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return dist(a) < dist(b); });
        order.resize(7);
        ASSERT_EQ(knn(pool[q], pool, 7, q), order) << "query " << q;
    }
}

TEST(LargestRemainder, SumsToTotalAndBreaksTiesLow) {
    const std::vector<double> third{1.0 / 3, 1.0 / 3, 1.0 / 3};
    EXPECT_EQ(largest_remainder(third, 4), (std::vector<std::size_t>{2, 1, 1}));
    EXPECT_EQ(largest_remainder(third, 0), (std::vector<std::size_t>{0, 0, 0}));
    Rng rng(2);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> w(1 + uniform_index(rng, 20));
        for (auto& v : w) v = uniform01(rng);
        const double s = std::accumulate(w.begin(), w.end(), 0.0);
        for (auto& v : w) v /= s;
        const std::size_t total = uniform_index(rng, 300);
        const auto share = largest_remainder(w, total);
        ASSERT_EQ(std::accumulate(share.begin(), share.end(), std::size_t{0}), total);
        for (std::size_t i = 0; i < w.size(); ++i) ASSERT_LE(std::fabs(double(share[i]) - w[i] * total), 1.0);
    }
}

TEST(AdasynPlan, HandWorkedToy) {
    AdasynConfig c;
    c.k_neighbors = 3;
    const auto p = adasyn_plan(toy(), c);
    EXPECT_EQ(p.minority_label, 1);
    EXPECT_EQ(p.total, 4u);
    ASSERT_EQ(p.ratio.size(), 4u);
    EXPECT_DOUBLE_EQ(p.ratio[0], 1.0 / 3);
    EXPECT_DOUBLE_EQ(p.ratio[1], 1.0 / 3);
    EXPECT_DOUBLE_EQ(p.ratio[2], 1.0 / 3);
    EXPECT_DOUBLE_EQ(p.ratio[3], 1.0);
    EXPECT_DOUBLE_EQ(p.weight[0], 1.0 / 6);
    EXPECT_DOUBLE_EQ(p.weight[3], 0.5);
    EXPECT_EQ(p.count, (std::vector<std::size_t>{1, 1, 0, 2}));
    EXPECT_FALSE(p.uniform_fallback);
}

TEST(AdasynPlan, UniformFallbackWhenNoMajorityNeighbours) {
    // Two far-apart clusters: no minority point sees a majority neighbour.
    const auto d = from_points({{0, 0}, {0, 1}, {1, 0}}, {{50, 50}, {50, 51}, {51, 50}, {51, 51}, {52, 52}});
    AdasynConfig c;
    c.k_neighbors = 2;
    const auto p = adasyn_plan(d, c);
    EXPECT_TRUE(p.uniform_fallback);
    EXPECT_EQ(p.total, 2u);
    EXPECT_EQ(p.count, (std::vector<std::size_t>{1, 1, 0}));
}

TEST(AdasynPlan, ClampsNeighbourCounts) {
    const auto d = from_points({{0}, {1}}, {{5}, {6}, {7}});
    AdasynConfig c;
    c.k_neighbors = 10;
    const auto p = adasyn_plan(d, c);
    EXPECT_EQ(p.density_k, 4u);
    EXPECT_EQ(p.minority_k, 1u);
}

TEST(AdasynPlan, MinorityLabelCanBeZero) {
    const auto d = from_points({{0}, {1}, {2}, {3}}, {{5}, {6}});
    const auto b = adasyn_balance(d, {});
    EXPECT_EQ(b.minority_label, 0);
    EXPECT_EQ(b.synthetic.size(), 2u);
    for (const auto& s : b.synthetic) EXPECT_EQ(s.sample.label, 0);
}

TEST(AdasynBalance, CountsAndInvariants39To111) {
    const auto train = imbalanced_39_111(3);
    AdasynConfig c;
    c.seed = 99;
    const auto b = adasyn_balance(train, c);
    ASSERT_EQ(b.synthetic.size(), 72u);
    const auto merged = b.merged();
    EXPECT_EQ(merged.count(0), 111u);
    EXPECT_EQ(merged.count(1), 111u);
    EXPECT_EQ(merged.role(), Role::Train);

    std::map<std::string, const Sample*> by_id;
    for (const auto& s : train.samples()) by_id[s.id] = &s;
    for (const auto& s : b.synthetic) {
        EXPECT_EQ(s.sample.label, 1);
        const auto& x = by_id.at(s.provenance.base_id)->features;
        const auto& z = by_id.at(s.provenance.neighbor_id)->features;
        EXPECT_EQ(by_id.at(s.provenance.neighbor_id)->label, 1);
        EXPECT_NE(s.provenance.base_id, s.provenance.neighbor_id);
        ASSERT_GE(s.provenance.lambda, 0.0);
        ASSERT_LT(s.provenance.lambda, 1.0);
        for (std::size_t j = 0; j < x.size(); ++j) {
            EXPECT_NEAR(s.sample.features[j], x[j] + s.provenance.lambda * (z[j] - x[j]), 1e-12);
            EXPECT_GE(s.sample.features[j], std::min(x[j], z[j]) - 1e-12);
            EXPECT_LE(s.sample.features[j], std::max(x[j], z[j]) + 1e-12);
        }
    }
    const auto mask = b.synthetic_mask();
    EXPECT_EQ(std::count(mask.begin(), mask.end(), true), 72);
}

TEST(AdasynBalance, BalancedInputAddsNothing) {
    const auto d = testing_helpers::constant_dataset(5, 5).with_role(Role::Train);
    EXPECT_TRUE(adasyn_balance(d, {}).synthetic.empty());
}

TEST(AdasynBalance, BetaScalesCount) {
    AdasynConfig c;
    c.beta = 0.5;
    EXPECT_EQ(adasyn_balance(imbalanced_39_111(1), c).synthetic.size(), 36u);
}

TEST(AdasynBalance, DeterministicForSeed) {
    const auto train = imbalanced_39_111(4);
    AdasynConfig c;
    c.seed = 5;
    const auto a = adasyn_balance(train, c).merged();
    const auto b = adasyn_balance(train, c).merged();
    EXPECT_TRUE(a == b);
    c.seed = 6;
    EXPECT_FALSE(a == adasyn_balance(train, c).merged());
}

TEST(AdasynBalance, Errors) {
    const auto d = toy();
    try {
        adasyn_balance(d.with_role(Role::Test), {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::LeakageGuard);
    }
    EXPECT_THROW(adasyn_balance(d.with_role(Role::Validation), {}), Error);
    EXPECT_NO_THROW(adasyn_balance(d.with_role(Role::Unassigned), {}));

    try {
        adasyn_balance(from_points({{0}}, {{1}, {2}}), {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MinorityTooSmall);
    }
    auto only_ones = testing_helpers::constant_dataset(4, 0).with_role(Role::Train);
    try {
        adasyn_balance(only_ones, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SingleClass);
    }
}
