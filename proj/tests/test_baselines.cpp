#include <gtest/gtest.h>

#include <cmath>

#include "cgpclf/baselines.hpp"
#include "cgpclf/datagen.hpp"
#include "helpers.hpp"

using namespace cgpclf;

namespace {

Dataset blobs(std::size_t per_class, double shift, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.n_minority = per_class;
    spec.n_majority = per_class;
    spec.layout = LayoutDescriptor::generic();
    spec.n_features = 2;
    spec.signal = SignalKind::MeanShift;
    spec.mean_shift = {shift, {0, 1}};
    spec.seed = seed;
    return generate(spec);
}

}  // namespace

TEST(Mlp, GradientMatchesCentralDifferences) {
    const auto d = blobs(15, 2.0, 1);
    MlpConfig c;
    c.seed = 4;
    auto m = init_mlp(2, c);
    ASSERT_EQ(m.params.size(), 2u * 10 + 10 + 10 + 1);
    const auto g = mlp_gradient(m, d);
    const double h = 1e-6;
    for (std::size_t p = 0; p < m.params.size(); ++p) {
        const double keep = m.params[p];
        m.params[p] = keep + h;
        const double up = mlp_loss(m, d);
        m.params[p] = keep - h;
        const double down = mlp_loss(m, d);
        m.params[p] = keep;
        const double fd = (up - down) / (2 * h);
        EXPECT_LE(std::fabs(fd - g[p]), 1e-4 * std::max(1.0, std::fabs(fd))) << "param " << p;
    }
}

TEST(Mlp, FitsSeparableBlobs) {
    const auto d = blobs(50, 4.0, 2);
    const auto r = train_mlp(d, d.subset(std::vector<std::size_t>{}, Role::Validation), {});
    EXPECT_GE(r.train_acc, 0.98);
    EXPECT_FALSE(r.val_acc.has_value());
}

TEST(Mlp, ZeroEpochsReturnsInitialisation) {
    const auto d = blobs(5, 1.0, 3);
    MlpConfig c;
    c.epochs = 0;
    c.seed = 8;
    const auto r = train_mlp(d, d, c);
    EXPECT_EQ(r.model.params, init_mlp(2, c).params);
    EXPECT_DOUBLE_EQ(*r.val_acc, r.train_acc);
}

TEST(Mlp, DeterministicAndValidated) {
    const auto d = blobs(10, 2.0, 4);
    MlpConfig c;
    c.epochs = 20;
    EXPECT_EQ(train_mlp(d, d, c).model.params, train_mlp(d, d, c).model.params);
    c.hidden = 0;
    EXPECT_THROW(train_mlp(d, d, c), Error);
}

TEST(Svm, SeparatesBlobs) {
    const auto train = blobs(60, 4.0, 5);
    const auto test = blobs(60, 4.0, 6);
    const auto r = train_linear_svm(train, {});
    EXPECT_GE(model_accuracy(r.model, test), 0.95);
    EXPECT_EQ(r.objective_history.size(), 50u);
}

TEST(Svm, FirstEpochBeatsZeroModel) {
    const auto d = blobs(40, 3.0, 7);
    SvmConfig c;
    c.epochs = 1;
    const SvmModel zero{std::vector<double>(2, 0.0), 0.0};
    EXPECT_DOUBLE_EQ(svm_objective(zero, d, c.lambda), 1.0);
    const auto r = train_linear_svm(d, c);
    EXPECT_LT(r.objective_history.front(), 1.0);
}

TEST(Svm, ObjectiveNonIncreasingOnFixedSet) {
    // Averaged stochastic iterates are not exactly monotone; rises stay small.
    const auto d = blobs(30, 1.5, 11);
    const auto r = train_linear_svm(d, {});
    for (std::size_t e = 1; e < r.objective_history.size(); ++e)
        EXPECT_LE(r.objective_history[e], r.objective_history[e - 1] + 0.03) << "epoch " << e;
    EXPECT_LT(r.objective_history.back(), r.objective_history.front());
}

TEST(Svm, IdenticalFeaturesPredictMajority) {
    const auto d = testing_helpers::make_dataset(10, 30, 2, [](std::size_t) { return std::vector<double>{1.0, 1.0}; });
    const auto r = train_linear_svm(d, {});
    EXPECT_DOUBLE_EQ(r.train_acc, 0.75);
}

TEST(Svm, DeterministicAndValidated) {
    const auto d = blobs(20, 2.0, 8);
    SvmConfig c;
    c.seed = 3;
    const auto a = train_linear_svm(d, c), b = train_linear_svm(d, c);
    EXPECT_EQ(a.model.w, b.model.w);
    EXPECT_EQ(a.model.b, b.model.b);
    EXPECT_THROW(train_linear_svm(testing_helpers::constant_dataset(4, 0), c), Error);
    c.lambda = 0.0;
    EXPECT_THROW(train_linear_svm(d, c), Error);
}

TEST(Activations, StableAtExtremes) {
    EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
    EXPECT_GT(sigmoid(800.0), 0.0);
    EXPECT_EQ(sigmoid(-800.0), 0.0);
    EXPECT_NEAR(softplus(800.0), 800.0, 1e-12);
    EXPECT_NEAR(softplus(0.0), std::log(2.0), 1e-15);
    EXPECT_TRUE(std::isfinite(softplus(-800.0)));
}
