// Synthetic, class-imbalanced datasets shaped like the real feature tables.
#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "cgpclf/common.hpp"
#include "cgpclf/dataset.hpp"

namespace cgpclf {

enum class SignalKind { None, Linear, MeanShift };

/// label = 1 iff weights . x > threshold (weights shorter than the feature
/// vector are zero-padded).
struct LinearSignal {
    std::vector<double> weights{1.0, -1.0};
    double threshold = 0.0;
};

/// Class-1 samples get `delta` added to every feature in `informative`.
struct MeanShiftSignal {
    double delta = 1.0;
    std::vector<std::size_t> informative{0};
};

struct GeneratorSpec {
    std::size_t n_minority = 39;  // class 1
    std::size_t n_majority = 111;  // class 0
    LayoutDescriptor layout = LayoutDescriptor::dcm16();
    std::size_t n_features = 0;  // Generic layout only
    SignalKind signal = SignalKind::None;
    LinearSignal linear;
    MeanShiftSignal mean_shift;
    double noise_sd = 1.0;
    std::uint64_t seed = 0;

    std::size_t width() const { return layout.expected_features().value_or(n_features); }

    void validate() const {
        if (n_minority == 0 || n_majority == 0) throw Error(ErrorCode::InvalidSpec, "class counts must be positive");
        if (width() == 0) throw Error(ErrorCode::InvalidSpec, "feature count must be positive");
        if (!(noise_sd > 0.0)) throw Error(ErrorCode::InvalidSpec, "noise_sd must be positive");
        if (signal == SignalKind::MeanShift)
            for (auto j : mean_shift.informative)
                if (j >= width()) throw Error(ErrorCode::InvalidSpec, "informative feature out of range");
        if (signal == SignalKind::Linear) {
            if (linear.weights.empty() || linear.weights.size() > width())
                throw Error(ErrorCode::InvalidSpec, "linear weights must be nonempty and fit the feature vector");
            bool any = false;
            for (double w : linear.weights) any |= (w != 0.0);
            if (!any) throw Error(ErrorCode::InvalidSpec, "linear weights are all zero");
        }
    }
};

/// Features are i.i.d. N(0, noise_sd^2). With a linear signal, samples are
/// drawn and kept until each class quota fills, so the rule labels every
/// sample exactly. Samples are emitted in a seeded random class order.
inline Dataset generate(const GeneratorSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    const std::size_t d = spec.width();
    const std::size_t n = spec.n_minority + spec.n_majority;

    auto draw = [&] {
        std::vector<double> x(d);
        for (auto& v : x) v = spec.noise_sd * standard_normal(rng);
        return x;
    };

    std::vector<int> labels;
    labels.reserve(n);
    labels.insert(labels.end(), spec.n_minority, 1);
    labels.insert(labels.end(), spec.n_majority, 0);
    shuffle(labels, rng);

    std::vector<std::vector<double>> pool[2];
    if (spec.signal == SignalKind::Linear) {
        const std::size_t need[2] = {spec.n_majority, spec.n_minority};
        // Bounded so a rule that (almost) never fires cannot spin forever.
        const std::size_t max_draws = 10000 * n;
        std::size_t draws = 0;
        while (pool[0].size() < need[0] || pool[1].size() < need[1]) {
            if (++draws > max_draws)
                throw Error(ErrorCode::InvalidSpec, "linear rule cannot fill both class quotas");
            auto x = draw();
            double s = 0.0;
            for (std::size_t j = 0; j < spec.linear.weights.size(); ++j) s += spec.linear.weights[j] * x[j];
            const int c = s > spec.linear.threshold ? 1 : 0;
            if (pool[c].size() < need[c]) pool[c].push_back(std::move(x));
        }
    }

    std::vector<Sample> samples;
    samples.reserve(n);
    std::size_t next[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "s%04zu", i);
        Sample s{id, id, labels[i], {}};
        if (spec.signal == SignalKind::Linear) {
            s.features = std::move(pool[s.label][next[s.label]++]);
        } else {
            s.features = draw();
            if (spec.signal == SignalKind::MeanShift && s.label == 1)
                for (auto j : spec.mean_shift.informative) s.features[j] += spec.mean_shift.delta;
        }
        samples.push_back(std::move(s));
    }
    return Dataset(std::move(samples), d, spec.layout);
}

}  // namespace cgpclf
