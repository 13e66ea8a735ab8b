// Small fixtures shared by the unit suites.
#pragma once

#include <string>
#include <vector>

#include "cgpclf/dataset.hpp"
#include "cgpclf/engine.hpp"

namespace testing_helpers {

/// `ones` samples labeled 1 then `zeros` labeled 0, features from `f(i)`.
template <typename F>
cgpclf::Dataset make_dataset(std::size_t ones, std::size_t zeros, std::size_t width, F&& f,
                             cgpclf::LayoutDescriptor layout = cgpclf::LayoutDescriptor::generic()) {
    std::vector<cgpclf::Sample> s;
    for (std::size_t i = 0; i < ones + zeros; ++i) {
        cgpclf::Sample x;
        x.id = "id" + std::to_string(i);
        x.group = "g" + std::to_string(i / 2);
        x.label = i < ones ? 1 : 0;
        x.features = f(i);
        if (x.features.size() != width) x.features.resize(width, 0.0);
        s.push_back(std::move(x));
    }
    return cgpclf::Dataset(std::move(s), width, layout);
}

inline cgpclf::Dataset constant_dataset(std::size_t ones, std::size_t zeros, std::size_t width = 2) {
    return make_dataset(ones, zeros, width, [&](std::size_t i) { return std::vector<double>(width, double(i)); });
}

/// Genome with the given nodes and outputs; unused trailing nodes are ADD(x0, x0).
inline cgpclf::Genome build_genome(std::size_t n_inputs, std::vector<cgpclf::Node> nodes,
                                   std::vector<std::size_t> outputs, bool recurrent = false,
                                   std::size_t n_nodes = 0) {
    cgpclf::Genome g;
    g.config = {n_inputs, n_nodes ? n_nodes : nodes.size(), outputs.size(), recurrent};
    g.nodes = std::move(nodes);
    g.nodes.resize(g.config.n_nodes, cgpclf::Node{cgpclf::Function::Add, {0, 0}});
    g.outputs = std::move(outputs);
    g.validate();
    return g;
}

}  // namespace testing_helpers
