// JSON forms of genomes, split manifests, run/batch/CV results and baseline
// models, plus the mean (SD) summary tables.
#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cgpclf/adasyn.hpp"
#include "cgpclf/baselines.hpp"
#include "cgpclf/crossval.hpp"
#include "cgpclf/dataset.hpp"
#include "cgpclf/engine.hpp"
#include "cgpclf/evolution.hpp"

namespace cgpclf {

using json = nlohmann::ordered_json;

namespace detail {
template <typename T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Genome

inline json genome_to_json(const Genome& g, std::optional<std::uint64_t> seed = std::nullopt) {
    json j;
    j["config"] = {{"n_inputs", g.config.n_inputs},
                   {"n_nodes", g.config.n_nodes},
                   {"n_outputs", g.config.n_outputs},
                   {"arity", kArity},
                   {"recurrent", g.config.recurrent}};
    json fn = json::array(), conn = json::array();
    for (const auto& n : g.nodes) {
        fn.push_back(static_cast<int>(n.function));
        conn.push_back(json::array({n.inputs[0], n.inputs[1]}));
    }
    j["function_genes"] = std::move(fn);
    j["connection_genes"] = std::move(conn);
    j["output_genes"] = g.outputs;
    j["seed"] = detail::opt(seed);
    return j;
}

namespace detail {

inline std::size_t unsigned_field(const json& v, const char* what) {
    if (!v.is_number_unsigned()) throw Error(ErrorCode::MalformedGenomeFile, std::string(what) + " must be a non-negative integer");
    return v.get<std::size_t>();
}

}  // namespace detail

inline Genome genome_from_json(const json& j) {
    using detail::unsigned_field;
    try {
        Genome g;
        const auto& c = j.at("config");
        g.config.n_inputs = unsigned_field(c.at("n_inputs"), "n_inputs");
        g.config.n_nodes = unsigned_field(c.at("n_nodes"), "n_nodes");
        g.config.n_outputs = c.contains("n_outputs") ? unsigned_field(c["n_outputs"], "n_outputs") : 1;
        g.config.recurrent = c.value("recurrent", false);
        if (c.value("arity", kArity) != kArity) throw Error(ErrorCode::MalformedGenomeFile, "arity must be 2");
        const auto& fn = j.at("function_genes");
        const auto& conn = j.at("connection_genes");
        if (fn.size() != conn.size())
            throw Error(ErrorCode::MalformedGenomeFile, "function and connection gene counts differ");
        for (std::size_t i = 0; i < fn.size(); ++i) {
            const auto f = unsigned_field(fn[i], "function gene");
            if (f >= kFunctionSet.size())
                throw Error(ErrorCode::MalformedGenomeFile, "unknown function gene " + std::to_string(f));
            if (conn[i].size() != kArity) throw Error(ErrorCode::MalformedGenomeFile, "connection gene arity");
            g.nodes.push_back(Node{static_cast<Function>(f), {unsigned_field(conn[i][0], "connection gene"),
                                                              unsigned_field(conn[i][1], "connection gene")}});
        }
        const auto& out = j.at("output_genes");
        if (!out.is_array()) throw Error(ErrorCode::MalformedGenomeFile, "output_genes must be an array");
        for (const auto& o : out) g.outputs.push_back(unsigned_field(o, "output gene"));
        g.validate();
        return g;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::MalformedGenomeFile) throw;
        throw Error(ErrorCode::MalformedGenomeFile, e.what());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedGenomeFile, e.what());
    }
}

inline Genome load_genome(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    try {
        return genome_from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedGenomeFile, e.what());
    }
}

// ---------------------------------------------------------------------------
// Configs and summaries

inline json to_json(const Summary& s) {
    return {{"mean", s.mean}, {"sd", s.sd}, {"sd_defined", s.sd_defined}, {"min", s.min}, {"max", s.max}, {"n", s.n}};
}

inline json to_json(const PartitionSummary& p) {
    return {{"train", to_json(p.train)}, {"validation", to_json(p.val)}, {"test", to_json(p.test)}};
}

inline json to_json(const EvolutionConfig& c) {
    return {{"lambda", c.lambda},
            {"mutation_rate", c.mutation_rate},
            {"max_iterations", c.max_iterations},
            {"n_runs", c.n_runs},
            {"recurrent_prob", c.recurrent_prob},
            {"n_nodes", c.genome.n_nodes},
            {"n_outputs", c.genome.n_outputs},
            {"recurrent", c.genome.recurrent},
            {"classify_mode", std::string(mode_name(c.classify_mode))},
            {"select_on_validation", c.select_on_validation},
            {"seed", c.seed}};
}

inline json to_json(const AdasynConfig& c) {
    return {{"k_neighbors", c.k_neighbors}, {"beta", c.beta}, {"seed", c.seed}, {"normalize", c.normalize}};
}

inline json to_json(const CvPlan& p) {
    return {{"k", p.k},
            {"repeats", p.repeats},
            {"seed", p.seed},
            {"runs_per_cell", p.runs_per_cell},
            {"balance", p.balance ? to_json(*p.balance) : json(nullptr)}};
}

// ---------------------------------------------------------------------------
// Split manifest

inline json split_manifest(const Split& s, const SplitSpec& spec) {
    return {{"seed", s.seed},
            {"fractions", {{"train", spec.train_frac}, {"validation", spec.val_frac}, {"test", spec.test_frac}}},
            {"train", s.train.ids()},
            {"validation", s.val.ids()},
            {"test", s.test.ids()}};
}

// ---------------------------------------------------------------------------
// Results

inline json to_json(const RunResult& r, bool include_genome = true) {
    json j;
    j["seed"] = r.seed;
    j["train_acc"] = r.train_acc;
    j["val_acc"] = detail::opt(r.val_acc);
    j["test_acc"] = detail::opt(r.test_acc);
    j["initial_train_acc"] = r.initial_train_acc;
    j["iterations_used"] = r.iterations_used;
    j["evaluations"] = r.evaluations;
    json hist = json::array();
    for (const auto& h : r.fitness_history) hist.push_back(json::array({h.iteration, h.fitness}));
    j["fitness_history"] = std::move(hist);
    if (r.best_val_genome) {
        j["best_validation"] = {{"val_acc", *r.best_val_acc},
                                {"test_acc", detail::opt(r.best_val_test_acc)},
                                {"genome", genome_to_json(*r.best_val_genome)}};
    }
    if (include_genome) j["genome"] = genome_to_json(r.winning_genome, r.seed);
    return j;
}

inline json to_json(const BatchResult& b) {
    json runs = json::array();
    for (const auto& r : b.runs) runs.push_back(to_json(r));
    return {{"config", to_json(b.config)}, {"runs", std::move(runs)}, {"summary", to_json(b.summary)}};
}

inline json to_json(const CvCell& c) {
    json j{{"repeat", c.repeat},
           {"fold", c.fold},
           {"seed", c.seed},
           {"train_acc", c.train_acc},
           {"val_acc", c.val_acc},
           {"test_acc", c.test_acc},
           {"train_class0", c.train_class0},
           {"train_class1", c.train_class1},
           {"val_size", c.val_size},
           {"test_size", c.test_size},
           {"n_synthetic", c.n_synthetic},
           {"majority_test_acc", c.majority_test_acc}};
    if (c.mlp_train_acc) {
        j["mlp"] = {{"train_acc", *c.mlp_train_acc},
                    {"val_acc", detail::opt(c.mlp_val_acc)},
                    {"test_acc", detail::opt(c.mlp_test_acc)}};
        j["svm"] = {{"train_acc", detail::opt(c.svm_train_acc)}, {"test_acc", detail::opt(c.svm_test_acc)}};
    }
    json runs = json::array();
    for (const auto& r : c.runs) runs.push_back(to_json(r, false));
    j["runs"] = std::move(runs);
    return j;
}

inline json to_json(const CvResult& r) {
    json cells = json::array();
    for (const auto& c : r.cells) cells.push_back(to_json(c));
    json summary = to_json(r.summary);
    summary["majority_test"] = to_json(r.majority);
    if (r.mlp) summary["mlp"] = to_json(*r.mlp);
    if (r.svm) summary["svm"] = {{"train", to_json(r.svm->train)}, {"test", to_json(r.svm->test)}};
    return {{"plan", to_json(r.plan)}, {"evolution", to_json(r.evolution)}, {"cells", std::move(cells)},
            {"summary", std::move(summary)}};
}

inline json to_json(const MlpModel& m, const MlpConfig& c) {
    return {{"type", "mlp"},
            {"n_inputs", m.n_inputs},
            {"hidden", m.hidden},
            {"config", {{"learning_rate", c.learning_rate}, {"epochs", c.epochs}, {"seed", c.seed}}},
            {"params", m.params}};
}

inline json to_json(const SvmModel& m, const SvmConfig& c) {
    return {{"type", "linear_svm"},
            {"config", {{"lambda", c.lambda}, {"epochs", c.epochs}, {"seed", c.seed}}},
            {"w", m.w},
            {"b", m.b}};
}

inline json provenance_json(const BalancedSet& b) {
    json items = json::array();
    for (const auto& s : b.synthetic)
        items.push_back({{"id", s.sample.id},
                         {"seed_index", s.provenance.seed_index},
                         {"base_id", s.provenance.base_id},
                         {"neighbor_id", s.provenance.neighbor_id},
                         {"lambda", s.provenance.lambda}});
    return {{"minority_label", b.minority_label},
            {"original_count", b.original.size()},
            {"synthetic_count", b.synthetic.size()},
            {"synthetic", std::move(items)}};
}

// ---------------------------------------------------------------------------
// Summary tables: one row per method, "mean (sd)" in percent.

struct TableRow {
    std::string method;
    std::optional<Summary> train, val, test;
};

inline std::string percent_cell(const std::optional<Summary>& s) {
    if (!s || s->n == 0) return "-";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f (%.2f)", 100.0 * s->mean, 100.0 * s->sd);
    return buf;
}

inline std::string summary_table(const std::vector<TableRow>& rows) {
    std::ostringstream os;
    os << "method,Train % (SD),Validation % (SD),Test % (SD)\n";
    for (const auto& r : rows)
        os << r.method << ',' << percent_cell(r.train) << ',' << percent_cell(r.val) << ',' << percent_cell(r.test)
           << '\n';
    return os.str();
}

inline std::string cells_table(const CvResult& r) {
    std::ostringstream os;
    os << "repeat,fold,seed,train_acc,val_acc,test_acc,majority_test_acc\n";
    for (const auto& c : r.cells)
        os << c.repeat << ',' << c.fold << ',' << c.seed << ',' << detail::format_double(c.train_acc) << ','
           << detail::format_double(c.val_acc) << ',' << detail::format_double(c.test_acc) << ','
           << detail::format_double(c.majority_test_acc) << '\n';
    return os.str();
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    out << text;
}

inline void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace cgpclf
