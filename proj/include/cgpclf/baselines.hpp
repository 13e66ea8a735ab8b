// Reference classifiers for comparison runs: a one-hidden-layer logistic
// MLP and a linear SVM trained by primal subgradient descent.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "cgpclf/common.hpp"
#include "cgpclf/dataset.hpp"

namespace cgpclf {

inline double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

/// log(1 + e^z) without overflow.
inline double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// ---------------------------------------------------------------------------
// MLP

struct MlpConfig {
    std::size_t hidden = 10;
    double learning_rate = 0.01;
    std::size_t epochs = 500;
    std::uint64_t seed = 0;
};

/// Parameters are stored flat: W1 (hidden x inputs, row-major), b1, w2, b2.
struct MlpModel {
    std::size_t n_inputs = 0;
    std::size_t hidden = 0;
    std::vector<double> params;

    std::size_t w1(std::size_t h, std::size_t j) const { return h * n_inputs + j; }
    std::size_t b1(std::size_t h) const { return hidden * n_inputs + h; }
    std::size_t w2(std::size_t h) const { return hidden * n_inputs + hidden + h; }
    std::size_t b2() const { return hidden * n_inputs + 2 * hidden; }
    std::size_t param_count() const { return hidden * n_inputs + 2 * hidden + 1; }

    /// Output pre-activation; `act` receives the hidden activations.
    double logit(std::span<const double> x, std::vector<double>& act) const {
        act.resize(hidden);
        double z = params[b2()];
        for (std::size_t h = 0; h < hidden; ++h) {
            double a = params[b1(h)];
            for (std::size_t j = 0; j < n_inputs; ++j) a += params[w1(h, j)] * x[j];
            act[h] = sigmoid(a);
            z += params[w2(h)] * act[h];
        }
        return z;
    }

    double probability(std::span<const double> x) const {
        std::vector<double> act;
        return sigmoid(logit(x, act));
    }

    int predict(std::span<const double> x) const { return probability(x) >= 0.5 ? 1 : 0; }
};

inline MlpModel init_mlp(std::size_t n_inputs, const MlpConfig& config) {
    MlpModel m{n_inputs, config.hidden, {}};
    m.params.assign(m.param_count(), 0.0);
    Rng rng(config.seed);
    const double r1 = 1.0 / std::sqrt(static_cast<double>(n_inputs));
    const double r2 = 1.0 / std::sqrt(static_cast<double>(config.hidden));
    for (std::size_t h = 0; h < config.hidden; ++h) {
        for (std::size_t j = 0; j < n_inputs; ++j) m.params[m.w1(h, j)] = r1 * (2.0 * uniform01(rng) - 1.0);
        m.params[m.w2(h)] = r2 * (2.0 * uniform01(rng) - 1.0);
    }
    return m;
}

/// Mean binary cross-entropy over `data`.
inline double mlp_loss(const MlpModel& m, const Dataset& data) {
    std::vector<double> act;
    double loss = 0.0;
    for (const auto& s : data.samples()) {
        const double z = m.logit(s.features, act);
        loss += softplus(z) - s.label * z;
    }
    return loss / static_cast<double>(data.size());
}

/// Adds the gradient of one sample's cross-entropy, scaled by `scale`.
inline void mlp_accumulate_gradient(const MlpModel& m, const Sample& s, double scale, std::vector<double>& grad,
                                    std::vector<double>& act) {
    const double z = m.logit(s.features, act);
    const double dz = (sigmoid(z) - s.label) * scale;
    grad[m.b2()] += dz;
    for (std::size_t h = 0; h < m.hidden; ++h) {
        grad[m.w2(h)] += dz * act[h];
        const double da = dz * m.params[m.w2(h)] * act[h] * (1.0 - act[h]);
        grad[m.b1(h)] += da;
        for (std::size_t j = 0; j < m.n_inputs; ++j) grad[m.w1(h, j)] += da * s.features[j];
    }
}

/// Gradient of mlp_loss with respect to params.
inline std::vector<double> mlp_gradient(const MlpModel& m, const Dataset& data) {
    std::vector<double> grad(m.param_count(), 0.0), act;
    const double scale = 1.0 / static_cast<double>(data.size());
    for (const auto& s : data.samples()) mlp_accumulate_gradient(m, s, scale, grad, act);
    return grad;
}

template <typename Model>
double model_accuracy(const Model& m, const Dataset& data) {
    if (data.empty()) throw Error(ErrorCode::EmptyDataset, "accuracy needs at least one sample");
    std::size_t correct = 0;
    for (const auto& s : data.samples()) correct += m.predict(s.features) == s.label;
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

struct MlpResult {
    MlpModel model;
    double train_acc = 0.0;
    std::optional<double> val_acc;
};

/// Per-sample gradient descent with a seeded visiting order. The
/// validation set is only scored, never used for stopping.
inline MlpResult train_mlp(const Dataset& train, const Dataset& val, const MlpConfig& config) {
    if (train.empty()) throw Error(ErrorCode::EmptyDataset, "training set is empty");
    if (config.hidden == 0) throw Error(ErrorCode::InvalidConfig, "hidden layer needs at least one unit");
    MlpResult r{init_mlp(train.n_features(), config), 0.0, std::nullopt};
    auto& m = r.model;
    Rng rng(derive_seed(config.seed, 1));
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad(m.param_count()), act;
    for (std::size_t e = 0; e < config.epochs; ++e) {
        shuffle(order, rng);
        for (auto i : order) {
            std::fill(grad.begin(), grad.end(), 0.0);
            mlp_accumulate_gradient(m, train[i], 1.0, grad, act);
            for (std::size_t p = 0; p < grad.size(); ++p) m.params[p] -= config.learning_rate * grad[p];
        }
    }
    r.train_acc = model_accuracy(m, train);
    if (!val.empty()) r.val_acc = model_accuracy(m, val);
    return r;
}

// ---------------------------------------------------------------------------
// Linear SVM

struct SvmConfig {
    double lambda = 0.01;  // L2 regularisation strength
    std::size_t epochs = 50;
    std::uint64_t seed = 0;
};

struct SvmModel {
    std::vector<double> w;
    double b = 0.0;

    double decision(std::span<const double> x) const {
        double s = b;
        for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
        return s;
    }

    int predict(std::span<const double> x) const { return decision(x) >= 0.0 ? 1 : 0; }
};

/// lambda/2 |w|^2 + mean hinge loss, labels mapped to -1/+1.
inline double svm_objective(const SvmModel& m, const Dataset& data, double lambda) {
    double hinge = 0.0;
    for (const auto& s : data.samples()) {
        const double y = s.label == 1 ? 1.0 : -1.0;
        hinge += std::max(0.0, 1.0 - y * m.decision(s.features));
    }
    const double norm = std::inner_product(m.w.begin(), m.w.end(), m.w.begin(), 0.0);
    return 0.5 * lambda * norm + hinge / static_cast<double>(data.size());
}

struct SvmResult {
    SvmModel model;
    double train_acc = 0.0;
    std::vector<double> objective_history;  // averaged model after each epoch
};

/// Pegasos-style stochastic subgradient steps with step 1/(lambda t), each
/// followed by projection of w onto the ball of radius 1/sqrt(lambda). The
/// bias is unregularised but clipped to the same radius. The returned model
/// is the running average of all iterates.
inline SvmResult train_linear_svm(const Dataset& train, const SvmConfig& config) {
    if (train.empty()) throw Error(ErrorCode::EmptyDataset, "training set is empty");
    if (train.count(0) == 0 || train.count(1) == 0)
        throw Error(ErrorCode::SingleClass, "linear SVM needs both classes");
    if (!(config.lambda > 0.0)) throw Error(ErrorCode::InvalidConfig, "lambda must be positive");

    const std::size_t d = train.n_features();
    SvmModel cur{std::vector<double>(d, 0.0), 0.0};
    SvmResult r{SvmModel{std::vector<double>(d, 0.0), 0.0}, 0.0, {}};
    auto& avg = r.model;

    Rng rng(config.seed);
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    const double radius = 1.0 / std::sqrt(config.lambda);
    std::size_t t = 0;
    for (std::size_t e = 0; e < config.epochs; ++e) {
        shuffle(order, rng);
        for (auto i : order) {
            ++t;
            const auto& s = train[i];
            const double y = s.label == 1 ? 1.0 : -1.0;
            const double eta = 1.0 / (config.lambda * static_cast<double>(t));
            const bool violated = y * cur.decision(s.features) < 1.0;
            for (std::size_t j = 0; j < d; ++j) {
                cur.w[j] *= 1.0 - eta * config.lambda;
                if (violated) cur.w[j] += eta * y * s.features[j];
            }
            if (violated) cur.b += eta * y;
            const double norm = std::sqrt(std::inner_product(cur.w.begin(), cur.w.end(), cur.w.begin(), 0.0));
            if (norm > radius)
                for (auto& v : cur.w) v *= radius / norm;
            cur.b = std::clamp(cur.b, -radius, radius);
            const double keep = static_cast<double>(t - 1) / static_cast<double>(t);
            for (std::size_t j = 0; j < d; ++j) avg.w[j] = keep * avg.w[j] + cur.w[j] / static_cast<double>(t);
            avg.b = keep * avg.b + cur.b / static_cast<double>(t);
        }
        r.objective_history.push_back(svm_objective(avg, train, config.lambda));
    }
    r.train_acc = model_accuracy(avg, train);
    return r;
}

}  // namespace cgpclf
