// Generates a dataset with a hidden linear rule, balances the training split
// with ADASYN, evolves a short batch of CGP classifiers and prints the best
// expression together with the inputs it reads.
//
//   planted_rule [iterations] [seed]

#include <cstdlib>
#include <iostream>

#include "cgpclf/cgpclf.hpp"

using namespace cgpclf;

int main(int argc, char** argv) {
    const std::size_t iterations = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 3000;
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 7;

    GeneratorSpec spec;
    spec.signal = SignalKind::Linear;
    spec.seed = seed;
    const auto data = generate(spec);

    auto split = stratified_split(data, SplitSpec{.seed = derive_seed(seed, 1)});
    const auto balanced = adasyn_balance(split.train, AdasynConfig{.seed = derive_seed(seed, 2)});
    std::cout << "train " << split.train.count(1) << '/' << split.train.count(0) << " -> "
              << balanced.synthetic.size() << " synthetic minority samples\n";
    split.train = balanced.merged();

    EvolutionConfig config;
    config.max_iterations = iterations;
    config.n_runs = 5;
    config.seed = derive_seed(seed, 3);
    const auto batch = run_batch(split, config, default_jobs());

    std::size_t best = 0;
    for (std::size_t i = 1; i < batch.runs.size(); ++i)
        if (batch.runs[i].val_acc > batch.runs[best].val_acc) best = i;
    const auto& g = batch.runs[best].winning_genome;
    const auto active = active_nodes(g);

    std::cout << summary_table({{"CGP", batch.summary.train, batch.summary.val, batch.summary.test}});
    std::cout << "best run " << best << ": " << to_expression(g) << '\n';
    std::cout << "uses " << active.inputs.size() << " of " << g.config.n_inputs << " inputs:";
    for (auto i : active.inputs) std::cout << ' ' << feature_name(data.layout(), i);
    std::cout << '\n';
}
