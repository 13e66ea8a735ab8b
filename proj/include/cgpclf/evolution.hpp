// (1 + lambda) evolutionary strategy over Cartesian genomes, with
// training-set accuracy as fitness and multi-run aggregation.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cgpclf/common.hpp"
#include "cgpclf/dataset.hpp"
#include "cgpclf/engine.hpp"

namespace cgpclf {

struct EvolutionConfig {
    std::size_t lambda = 4;
    double mutation_rate = 0.1;
    std::size_t max_iterations = 15000;
    std::size_t n_runs = 10;
    double recurrent_prob = 0.0;
    // n_inputs == 0 means "take it from the training data".
    GenomeConfig genome{0, 50, 1, false};
    ClassifyMode classify_mode = ClassifyMode::Wide;
    std::uint64_t seed = 0;
    bool select_on_validation = false;

    /// RCGP defaults: recurrent genome with 10% feedback connections.
    static EvolutionConfig recurrent_defaults() {
        EvolutionConfig c;
        c.genome.recurrent = true;
        c.recurrent_prob = 0.1;
        return c;
    }

    void validate() const {
        if (!(mutation_rate > 0.0 && mutation_rate <= 1.0))
            throw Error(ErrorCode::InvalidProbability, "mutation_rate must lie in (0, 1]");
        if (lambda == 0) throw Error(ErrorCode::InvalidConfig, "lambda must be at least 1");
        if (n_runs == 0) throw Error(ErrorCode::InvalidConfig, "n_runs must be at least 1");
        check_recurrent_prob(genome, recurrent_prob);
        if (classify_mode == ClassifyMode::Streamed && !genome.recurrent)
            throw Error(ErrorCode::NotRecurrent, "streamed classification needs a recurrent genome");
    }
};

/// Genome shape for `data` under `config`; a preset n_inputs must agree.
inline GenomeConfig resolve_genome_config(const EvolutionConfig& config, const Dataset& data) {
    GenomeConfig g = config.genome;
    const auto need = input_count(data.layout(), data.n_features(), config.classify_mode);
    if (g.n_inputs != 0 && g.n_inputs != need)
        throw Error(ErrorCode::InvalidConfig, "genome has " + std::to_string(g.n_inputs) +
                                                  " inputs but the data needs " + std::to_string(need));
    g.n_inputs = need;
    g.validate();
    return g;
}

// ---------------------------------------------------------------------------
// Mutation

struct MutationOutcome {
    Genome child;
    std::size_t genes_resampled = 0;  // genes drawn afresh (a redraw may repeat the old value)
};

/// Point mutation: every gene is independently redrawn with probability
/// `rate`. Connection redraws follow the same recurrent_prob rule as
/// random_genome.
inline MutationOutcome mutate_tracked(const Genome& parent, double rate, double recurrent_prob, Rng& rng) {
    require_probability(rate, "mutation rate");
    check_recurrent_prob(parent.config, recurrent_prob);
    MutationOutcome out{parent, 0};
    auto& g = out.child;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        auto& n = g.nodes[i];
        if (bernoulli(rng, rate)) {
            n.function = random_function(rng);
            ++out.genes_resampled;
        }
        for (auto& c : n.inputs) {
            if (bernoulli(rng, rate)) {
                c = random_connection(g.config, i, recurrent_prob, rng);
                ++out.genes_resampled;
            }
        }
    }
    for (auto& o : g.outputs) {
        if (bernoulli(rng, rate)) {
            o = random_output(g.config, rng);
            ++out.genes_resampled;
        }
    }
    return out;
}

inline Genome mutate(const Genome& parent, double rate, double recurrent_prob, Rng& rng) {
    return mutate_tracked(parent, rate, recurrent_prob, rng).child;
}

// ---------------------------------------------------------------------------
// Fitness

/// Fraction of samples whose predicted class equals the label.
inline double fitness(const Phenotype& p, const Dataset& data, ClassifyMode mode = ClassifyMode::Wide) {
    if (data.empty()) throw Error(ErrorCode::EmptyDataset, "fitness needs at least one sample");
    std::size_t correct = 0;
    if (mode == ClassifyMode::Wide) {
        std::vector<double> scratch;
        for (const auto& s : data.samples())
            correct += decide(p.evaluate_first(s.features, scratch)) == s.label;
    } else {
        for (const auto& s : data.samples())
            correct += classify(p, s.features, mode, data.layout()) == s.label;
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

inline double fitness(const Genome& g, const Dataset& data, ClassifyMode mode = ClassifyMode::Wide) {
    return fitness(Phenotype(g), data, mode);
}

inline std::optional<double> accuracy_if_any(const Genome& g, const Dataset& data, ClassifyMode mode) {
    if (data.empty()) return std::nullopt;
    return fitness(g, data, mode);
}

// ---------------------------------------------------------------------------
// Single run

struct HistoryPoint {
    std::size_t iteration = 0;
    double fitness = 0.0;

    friend bool operator==(const HistoryPoint&, const HistoryPoint&) = default;
};

struct RunResult {
    Genome winning_genome;
    double train_acc = 0.0;
    std::optional<double> val_acc;
    std::optional<double> test_acc;
    std::size_t iterations_used = 0;
    std::size_t evaluations = 0;  // training-set fitness evaluations
    std::uint64_t seed = 0;
    double initial_train_acc = 0.0;
    // Parent fitness each time it strictly improved, starting at iteration 0.
    std::vector<HistoryPoint> fitness_history;

    // Filled when select_on_validation is set.
    std::optional<Genome> best_val_genome;
    std::optional<double> best_val_acc;
    std::optional<double> best_val_test_acc;
};

/// One (1 + lambda) run. Each iteration breeds lambda mutants of the parent,
/// the first fittest mutant replaces the parent when it is at least as fit
/// (ties accept the offspring), and the run stops at the iteration budget
/// or at perfect training accuracy.
inline RunResult evolve(const Dataset& train, const Dataset& val, const Dataset& test,
                        const EvolutionConfig& config, std::uint64_t seed) {
    config.validate();
    if (train.empty()) throw Error(ErrorCode::EmptyDataset, "training set is empty");
    const auto gc = resolve_genome_config(config, train);
    const auto mode = config.classify_mode;

    Rng rng(seed);
    RunResult r;
    r.seed = seed;
    Genome parent = random_genome(gc, config.recurrent_prob, rng);
    double parent_fit = fitness(parent, train, mode);
    r.evaluations = 1;
    r.initial_train_acc = parent_fit;
    r.fitness_history.push_back({0, parent_fit});

    auto track_validation = [&](const Genome& g) {
        if (!config.select_on_validation || val.empty()) return;
        const double v = fitness(g, val, mode);
        if (!r.best_val_acc || v > *r.best_val_acc) {
            r.best_val_acc = v;
            r.best_val_genome = g;
        }
    };
    track_validation(parent);

    std::size_t it = 0;
    while (it < config.max_iterations && parent_fit < 1.0) {
        ++it;
        Genome best;
        double best_fit = -1.0;
        for (std::size_t k = 0; k < config.lambda; ++k) {
            Genome child = mutate(parent, config.mutation_rate, config.recurrent_prob, rng);
            const double f = fitness(child, train, mode);
            ++r.evaluations;
            if (f > best_fit) {
                best_fit = f;
                best = std::move(child);
            }
        }
        if (best_fit >= parent_fit) {
            if (best_fit > parent_fit) r.fitness_history.push_back({it, best_fit});
            parent = std::move(best);
            parent_fit = best_fit;
            track_validation(parent);
        }
    }

    r.iterations_used = it;
    r.train_acc = parent_fit;
    r.val_acc = accuracy_if_any(parent, val, mode);
    r.test_acc = accuracy_if_any(parent, test, mode);
    if (r.best_val_genome) r.best_val_test_acc = accuracy_if_any(*r.best_val_genome, test, mode);
    r.winning_genome = std::move(parent);
    return r;
}

// ---------------------------------------------------------------------------
// Batches

struct PartitionSummary {
    Summary train;
    Summary val;
    Summary test;
};

/// Aggregates whichever accuracies are present across runs.
inline PartitionSummary summarize_runs(std::span<const RunResult> runs) {
    std::vector<double> tr, va, te;
    for (const auto& r : runs) {
        tr.push_back(r.train_acc);
        if (r.val_acc) va.push_back(*r.val_acc);
        if (r.test_acc) te.push_back(*r.test_acc);
    }
    return {summarize(tr), summarize(va), summarize(te)};
}

struct BatchResult {
    EvolutionConfig config;
    std::vector<RunResult> runs;
    PartitionSummary summary;
};

inline std::uint64_t run_seed(std::uint64_t master, std::size_t run_index) {
    return derive_seed(master, run_index);
}

/// n_runs independent evolve() calls, seeded by (config.seed, run index).
inline BatchResult run_batch(const Split& split, const EvolutionConfig& config, std::size_t jobs = 1) {
    config.validate();
    BatchResult b;
    b.config = config;
    b.runs.resize(config.n_runs);
    parallel_for(config.n_runs, jobs, [&](std::size_t i) {
        b.runs[i] = evolve(split.train, split.val, split.test, config, run_seed(config.seed, i));
    });
    b.summary = summarize_runs(b.runs);
    return b;
}

}  // namespace cgpclf
