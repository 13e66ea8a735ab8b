// Cartesian genomes: representation, execution (acyclic and recurrent) and
// white-box decoding into expressions and DOT graphs.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cgpclf/common.hpp"
#include "cgpclf/dataset.hpp"

namespace cgpclf {

// ---------------------------------------------------------------------------
// Function set

enum class Function : std::uint8_t { Add = 0, Sub = 1, Mul = 2, DivProtected = 3 };

/// Denominators with magnitude at or below this make division return 1.
inline constexpr double kDivisionGuard = 1e-10;

struct FunctionInfo {
    Function id;
    std::string_view name;
    std::string_view symbol;
};

inline constexpr std::array<FunctionInfo, 4> kFunctionSet{{
    {Function::Add, "ADD", "+"},
    {Function::Sub, "SUB", "-"},
    {Function::Mul, "MUL", "*"},
    {Function::DivProtected, "DIV", "/"},
}};

inline const FunctionInfo& info(Function f) { return kFunctionSet[static_cast<std::size_t>(f)]; }

inline double apply(Function f, double a, double b) {
    switch (f) {
        case Function::Add: return a + b;
        case Function::Sub: return a - b;
        case Function::Mul: return a * b;
        case Function::DivProtected: return std::abs(b) <= kDivisionGuard ? 1.0 : a / b;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Genome

inline constexpr std::size_t kArity = 2;

/// Single-row grid with unrestricted levels-back.
struct GenomeConfig {
    std::size_t n_inputs = 1;
    std::size_t n_nodes = 50;
    std::size_t n_outputs = 1;
    bool recurrent = false;

    std::size_t address_count() const { return n_inputs + n_nodes; }

    void validate() const {
        if (n_inputs == 0) throw Error(ErrorCode::InvalidConfig, "n_inputs must be positive");
        if (n_nodes == 0) throw Error(ErrorCode::InvalidConfig, "n_nodes must be positive");
        if (n_outputs == 0) throw Error(ErrorCode::InvalidConfig, "n_outputs must be positive");
    }

    friend bool operator==(const GenomeConfig&, const GenomeConfig&) = default;
};

struct Node {
    Function function = Function::Add;
    std::array<std::size_t, kArity> inputs{};

    friend bool operator==(const Node&, const Node&) = default;
};

/// Address space: [0, n_inputs) are program inputs, [n_inputs,
/// n_inputs + n_nodes) are nodes in grid order.
struct Genome {
    GenomeConfig config;
    std::vector<Node> nodes;
    std::vector<std::size_t> outputs;

    bool is_input(std::size_t address) const { return address < config.n_inputs; }
    std::size_t node_address(std::size_t node) const { return config.n_inputs + node; }

    /// True when node `node` reads `address` before it is updated in a sweep.
    bool is_feedback(std::size_t node, std::size_t address) const {
        return address >= node_address(node);
    }

    /// Function gene, then connection genes, per node; output genes last.
    std::size_t gene_count() const { return nodes.size() * (1 + kArity) + outputs.size(); }

    void validate() const {
        config.validate();
        if (nodes.size() != config.n_nodes)
            throw Error(ErrorCode::InvalidGenome, "node count does not match config");
        if (outputs.size() != config.n_outputs)
            throw Error(ErrorCode::InvalidGenome, "output count does not match config");
        const auto limit = config.address_count();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (static_cast<std::size_t>(nodes[i].function) >= kFunctionSet.size())
                throw Error(ErrorCode::InvalidGenome, "node " + std::to_string(i) + " has an unknown function");
            for (auto a : nodes[i].inputs) {
                if (a >= limit)
                    throw Error(ErrorCode::InvalidGenome, "node " + std::to_string(i) + " addresses " +
                                                              std::to_string(a) + " outside the genome");
                if (!config.recurrent && is_feedback(i, a))
                    throw Error(ErrorCode::InvalidGenome,
                                "acyclic node " + std::to_string(i) + " reads a later or same node");
            }
        }
        for (auto o : outputs)
            if (o >= limit) throw Error(ErrorCode::InvalidGenome, "output gene outside the genome");
    }

    friend bool operator==(const Genome&, const Genome&) = default;
};

/// Draws a connection gene for `node`. With probability `recurrent_prob` the
/// source is the node itself or a later node; otherwise it strictly precedes.
inline std::size_t random_connection(const GenomeConfig& config, std::size_t node,
                                     double recurrent_prob, Rng& rng) {
    const std::size_t own = config.n_inputs + node;
    if (config.recurrent && bernoulli(rng, recurrent_prob))
        return own + uniform_index(rng, config.address_count() - own);
    return uniform_index(rng, own);
}

inline Function random_function(Rng& rng) {
    return static_cast<Function>(uniform_index(rng, kFunctionSet.size()));
}

inline std::size_t random_output(const GenomeConfig& config, Rng& rng) {
    return uniform_index(rng, config.address_count());
}

inline void check_recurrent_prob(const GenomeConfig& config, double recurrent_prob) {
    require_probability(recurrent_prob, "recurrent_prob");
    if (recurrent_prob > 0.0 && !config.recurrent)
        throw Error(ErrorCode::InvalidProbability, "recurrent_prob > 0 needs a recurrent genome");
}

inline Genome random_genome(const GenomeConfig& config, double recurrent_prob, Rng& rng) {
    config.validate();
    check_recurrent_prob(config, recurrent_prob);
    Genome g;
    g.config = config;
    g.nodes.resize(config.n_nodes);
    for (std::size_t i = 0; i < config.n_nodes; ++i) {
        g.nodes[i].function = random_function(rng);
        for (auto& c : g.nodes[i].inputs) c = random_connection(config, i, recurrent_prob, rng);
    }
    g.outputs.resize(config.n_outputs);
    for (auto& o : g.outputs) o = random_output(config, rng);
    return g;
}

// ---------------------------------------------------------------------------
// Active graph

struct ActiveSet {
    std::vector<std::size_t> nodes;   // node indices, ascending
    std::vector<std::size_t> inputs;  // input indices, ascending
};

/// Everything reachable backwards from the output genes, feedback edges
/// included.
inline ActiveSet active_nodes(const Genome& g) {
    const auto n_in = g.config.n_inputs;
    std::vector<char> seen(g.config.address_count(), 0);
    std::vector<std::size_t> stack(g.outputs.begin(), g.outputs.end());
    while (!stack.empty()) {
        const auto a = stack.back();
        stack.pop_back();
        if (seen[a]) continue;
        seen[a] = 1;
        if (a >= n_in)
            for (auto src : g.nodes[a - n_in].inputs)
                if (!seen[src]) stack.push_back(src);
    }
    ActiveSet out;
    for (std::size_t a = 0; a < seen.size(); ++a) {
        if (!seen[a]) continue;
        if (a < n_in) out.inputs.push_back(a);
        else out.nodes.push_back(a - n_in);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Execution

struct ExecutionState {
    std::vector<double> node_values;
    std::size_t passes = 1;

    explicit ExecutionState(std::size_t n_nodes = 0, std::size_t passes_ = 1)
        : node_values(n_nodes, 0.0), passes(passes_) {}

    void reset() { std::fill(node_values.begin(), node_values.end(), 0.0); }
};

/// A genome reduced to its active nodes, ready for repeated evaluation.
/// Sweeps visit nodes in ascending index order; a read of a node that has
/// not been updated yet in the current sweep sees its previous value.
class Phenotype {
public:
    explicit Phenotype(const Genome& g) : config_(g.config), outputs_(g.outputs) {
        for (auto i : active_nodes(g).nodes) steps_.push_back({i, g.nodes[i]});
    }

    const GenomeConfig& config() const { return config_; }

    ExecutionState fresh_state(std::size_t passes = 1) const {
        return ExecutionState(config_.n_nodes, passes);
    }

    /// Runs `state.passes` sweeps over `inputs`; node values stay in `state`.
    void sweep(std::span<const double> inputs, ExecutionState& state) const {
        check_inputs(inputs);
        if (state.node_values.size() != config_.n_nodes) state.node_values.assign(config_.n_nodes, 0.0);
        for (std::size_t p = 0; p < state.passes; ++p) run_sweep(inputs, state.node_values);
    }

    std::vector<double> read_outputs(std::span<const double> inputs, const ExecutionState& state) const {
        std::vector<double> out;
        out.reserve(outputs_.size());
        for (auto a : outputs_) out.push_back(value(a, inputs, state.node_values));
        return out;
    }

    std::vector<double> execute(std::span<const double> inputs, ExecutionState& state) const {
        sweep(inputs, state);
        return read_outputs(inputs, state);
    }

    /// First output after one sweep from a zero state.
    double evaluate_first(std::span<const double> inputs, std::vector<double>& scratch) const {
        check_inputs(inputs);
        scratch.assign(config_.n_nodes, 0.0);
        run_sweep(inputs, scratch);
        return value(outputs_.front(), inputs, scratch);
    }

private:
    struct Step {
        std::size_t index;
        Node node;
    };

    void check_inputs(std::span<const double> inputs) const {
        if (inputs.size() != config_.n_inputs)
            throw Error(ErrorCode::InputLengthMismatch, "expected " + std::to_string(config_.n_inputs) +
                                                            " inputs, got " + std::to_string(inputs.size()));
        for (double v : inputs)
            if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, "input is not finite");
    }

    double value(std::size_t a, std::span<const double> inputs, const std::vector<double>& nodes) const {
        return a < config_.n_inputs ? inputs[a] : nodes[a - config_.n_inputs];
    }

    void run_sweep(std::span<const double> inputs, std::vector<double>& nodes) const {
        for (const auto& s : steps_)
            nodes[s.index] = apply(s.node.function, value(s.node.inputs[0], inputs, nodes),
                                   value(s.node.inputs[1], inputs, nodes));
    }

    GenomeConfig config_;
    std::vector<std::size_t> outputs_;
    std::vector<Step> steps_;
};

inline std::vector<double> execute(const Genome& g, std::span<const double> inputs, ExecutionState& state) {
    return Phenotype(g).execute(inputs, state);
}

/// Execute from a zero state with `passes` sweeps.
inline std::vector<double> execute(const Genome& g, std::span<const double> inputs, std::size_t passes = 1) {
    ExecutionState state(g.config.n_nodes, passes);
    return execute(g, inputs, state);
}

/// Feeds one frame per sweep, carrying node values across frames.
inline std::vector<double> execute_streamed(const Phenotype& p,
                                            std::span<const std::vector<double>> series) {
    if (!p.config().recurrent) throw Error(ErrorCode::NotRecurrent, "streamed execution needs a recurrent genome");
    if (series.empty()) throw Error(ErrorCode::EmptySeries, "series has no frames");
    auto state = p.fresh_state(1);
    for (const auto& frame : series) p.sweep(frame, state);
    return p.read_outputs(series.back(), state);
}

inline std::vector<double> execute_streamed(const Genome& g, std::span<const std::vector<double>> series) {
    return execute_streamed(Phenotype(g), series);
}

// ---------------------------------------------------------------------------
// Classification

enum class ClassifyMode { Wide, Streamed };

inline std::string_view mode_name(ClassifyMode m) { return m == ClassifyMode::Wide ? "wide" : "streamed"; }

inline ClassifyMode parse_mode(std::string_view s) {
    if (s == "wide") return ClassifyMode::Wide;
    if (s == "streamed") return ClassifyMode::Streamed;
    throw Error(ErrorCode::InvalidConfig, "unknown classify mode '" + std::string(s) + "'");
}

inline constexpr double kDecisionThreshold = 0.5;

/// Class 1 iff the output is finite and at least the threshold.
inline int decide(double output) {
    return (std::isfinite(output) && output >= kDecisionThreshold) ? 1 : 0;
}

/// Genome input count needed for a layout under a classify mode.
inline std::size_t input_count(const LayoutDescriptor& layout, std::size_t n_features, ClassifyMode mode) {
    return mode == ClassifyMode::Wide ? n_features : layout.stream_width();
}

inline int classify(const Phenotype& p, std::span<const double> features, ClassifyMode mode,
                    const LayoutDescriptor& layout) {
    if (mode == ClassifyMode::Wide) {
        auto state = p.fresh_state(1);
        return decide(p.execute(features, state).front());
    }
    const auto frames = to_frames(features, layout);
    return decide(execute_streamed(p, frames).front());
}

inline int classify(const Genome& g, std::span<const double> features, ClassifyMode mode = ClassifyMode::Wide,
                    const LayoutDescriptor& layout = LayoutDescriptor::generic()) {
    return classify(Phenotype(g), features, mode, layout);
}

// ---------------------------------------------------------------------------
// Decoding

/// Infix, fully parenthesised expression per output. Inputs print as x{i};
/// a read of a node not yet updated in the sweep prints as node[i]@prev.
inline std::vector<std::string> to_expressions(const Genome& g) {
    const auto n_in = g.config.n_inputs;
    std::vector<std::string> memo(g.config.n_nodes);
    std::vector<char> done(g.config.n_nodes, 0);

    std::function<const std::string&(std::size_t)> render_node = [&](std::size_t i) -> const std::string& {
        if (done[i]) return memo[i];
        const auto& n = g.nodes[i];
        std::string operand[kArity];
        for (std::size_t k = 0; k < kArity; ++k) {
            const auto a = n.inputs[k];
            if (a < n_in) operand[k] = "x" + std::to_string(a);
            else if (g.is_feedback(i, a)) operand[k] = "node[" + std::to_string(a - n_in) + "]@prev";
            else operand[k] = render_node(a - n_in);
        }
        memo[i] = "(" + operand[0] + " " + std::string(info(n.function).symbol) + " " + operand[1] + ")";
        done[i] = 1;
        return memo[i];
    };

    std::vector<std::string> out;
    for (auto a : g.outputs) out.push_back(a < n_in ? "x" + std::to_string(a) : render_node(a - n_in));
    return out;
}

/// Single-output genomes give the bare expression; otherwise one
/// "y{k} = ..." line per output.
inline std::string to_expression(const Genome& g) {
    const auto exprs = to_expressions(g);
    if (exprs.size() == 1) return exprs.front();
    std::string s;
    for (std::size_t k = 0; k < exprs.size(); ++k) {
        if (k) s += '\n';
        s += "y" + std::to_string(k) + " = " + exprs[k];
    }
    return s;
}

/// Graphviz rendering with stable naming (in{i}, n{i}, out{i}). With
/// `active_only`, only used inputs and active nodes appear. Feedback edges
/// are dashed.
inline std::string to_dot(const Genome& g, bool active_only = true) {
    const auto n_in = g.config.n_inputs;
    std::vector<std::size_t> inputs, nodes;
    if (active_only) {
        auto act = active_nodes(g);
        inputs = std::move(act.inputs);
        nodes = std::move(act.nodes);
    } else {
        for (std::size_t i = 0; i < n_in; ++i) inputs.push_back(i);
        for (std::size_t i = 0; i < g.config.n_nodes; ++i) nodes.push_back(i);
    }
    auto name = [&](std::size_t a) {
        return a < n_in ? "in" + std::to_string(a) : "n" + std::to_string(a - n_in);
    };

    std::ostringstream os;
    os << "digraph cgp {\n";
    os << "  rankdir=LR;\n";
    for (auto i : inputs) os << "  in" << i << " [label=\"x" << i << "\", shape=box];\n";
    for (auto i : nodes) os << "  n" << i << " [label=\"" << info(g.nodes[i].function).name << "\"];\n";
    for (std::size_t k = 0; k < g.outputs.size(); ++k)
        os << "  out" << k << " [label=\"out" << k << "\", shape=doublecircle];\n";
    for (auto i : nodes) {
        for (std::size_t k = 0; k < kArity; ++k) {
            const auto a = g.nodes[i].inputs[k];
            os << "  " << name(a) << " -> n" << i;
            if (g.is_feedback(i, a)) os << " [style=dashed]";
            os << ";\n";
        }
    }
    for (std::size_t k = 0; k < g.outputs.size(); ++k) os << "  " << name(g.outputs[k]) << " -> out" << k << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace cgpclf
