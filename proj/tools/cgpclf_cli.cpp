// cgpclf: generate data, split, balance, evolve, cross-validate and decode
// CGP / RCGP classifiers from the command line.
//
// Run commands write to <out>/<command>-<timestamp>-<seed>/ and move that
// directory under <out>/failed/ when a stage throws.

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cgpclf/cgpclf.hpp"

namespace fs = std::filesystem;
using namespace cgpclf;

namespace {

// Seed streams derived from the master --seed.
constexpr std::uint64_t kSplitStream = 1, kBalanceStream = 2, kEvolutionStream = 3, kBaselineStream = 4,
                        kFoldStream = 5;

struct Options {
    // data
    std::string data;
    std::string layout = "dcm16";
    std::size_t timepoints = kDefaultTimepoints;
    std::uint64_t seed = 0;
    // gen-data
    std::size_t n_minority = 39, n_majority = 111, n_features = 0;
    std::string signal = "none";
    double delta = 1.0, noise_sd = 1.0, threshold = 0.0;
    std::vector<std::size_t> informative{0};
    std::vector<double> weights{1.0, -1.0};
    std::string output;
    // split
    double train_frac = 0.70, val_frac = 0.15, test_frac = 0.15;
    // evolution
    bool recurrent = false;
    double recurrent_prob = -1.0;  // < 0: 0.1 when recurrent, else 0
    double mutation_rate = 0.1;
    std::size_t iterations = 15000, runs = 10, lambda = 4, nodes = 50;
    std::string mode = "wide";
    bool select_on_validation = false;
    // adasyn; unset means the command's default (on for balance/cv, off for train)
    std::optional<bool> balance;
    std::size_t k_neighbors = 5;
    double beta = 1.0;
    bool normalize = false;
    // crossval
    std::size_t k_folds = 10, repeats = 10;
    // baselines
    bool baselines = false;
    std::size_t hidden = 10, mlp_epochs = 500, svm_epochs = 50;
    double learning_rate = 0.01, svm_lambda = 0.01;
    // output
    std::string out = "runs";
    std::string run_name;
    std::size_t jobs = default_jobs();
    bool dry_run = false;
    // decode / report
    std::string genome, dot, json_out, results;
};

// ---------------------------------------------------------------------------
// Config file: INI sections are only grouping; every key is a long flag name.

const std::set<std::string> kConfigSections{"data", "generator", "split", "evolution", "adasyn",
                                            "crossval", "baselines", "output"};

std::string find_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return argv[i + 1];
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return {};
}

std::vector<std::string> config_arguments(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
    std::vector<std::string> args;
    for (const auto& item : CLI::ConfigINI().from_config(in)) {
        if (item.name == "++" || item.name == "--") continue;
        for (const auto& p : item.parents)
            if (!kConfigSections.count(p)) throw Error(ErrorCode::InvalidConfig, "unknown config section [" + p + "]");
        std::string flag = "--" + item.name;
        std::replace(flag.begin(), flag.end(), '_', '-');
        std::string value;
        for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? "," : "") + item.inputs[i];
        args.push_back(flag + "=" + value);
    }
    return args;
}

// Places config-file arguments right after the subcommand name, so that any
// flag given on the command line comes later and wins.
std::vector<std::string> merged_arguments(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const auto path = find_config_path(argc, argv);
    if (path.empty()) return args;
    const auto extra = config_arguments(path);
    auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return a.rfind('-', 0) != 0; });
    if (sub == args.end()) return args;
    args.insert(sub + 1, extra.begin(), extra.end());
    return args;
}

// ---------------------------------------------------------------------------
// Resolved configurations

LayoutDescriptor layout_of(const Options& o) { return LayoutDescriptor::parse(o.layout, o.timepoints); }

EvolutionConfig evolution_config(const Options& o) {
    EvolutionConfig c = o.recurrent ? EvolutionConfig::recurrent_defaults() : EvolutionConfig{};
    if (o.recurrent_prob >= 0.0) c.recurrent_prob = o.recurrent_prob;
    c.genome.recurrent = o.recurrent || c.recurrent_prob > 0.0;
    c.genome.n_nodes = o.nodes;
    c.mutation_rate = o.mutation_rate;
    c.max_iterations = o.iterations;
    c.n_runs = o.runs;
    c.lambda = o.lambda;
    c.classify_mode = parse_mode(o.mode);
    c.select_on_validation = o.select_on_validation;
    c.seed = derive_seed(o.seed, kEvolutionStream);
    c.validate();
    return c;
}

AdasynConfig adasyn_config(const Options& o) {
    AdasynConfig c;
    c.k_neighbors = o.k_neighbors;
    c.beta = o.beta;
    c.normalize = o.normalize;
    c.seed = derive_seed(o.seed, kBalanceStream);
    c.validate();
    return c;
}

SplitSpec split_spec(const Options& o) {
    SplitSpec s{o.train_frac, o.val_frac, o.test_frac, derive_seed(o.seed, kSplitStream)};
    s.validate();
    return s;
}

BaselineOptions baseline_options(const Options& o) {
    BaselineOptions b;
    b.enabled = o.baselines;
    b.mlp.hidden = o.hidden;
    b.mlp.epochs = o.mlp_epochs;
    b.mlp.learning_rate = o.learning_rate;
    b.mlp.seed = derive_seed(o.seed, kBaselineStream, 0);
    b.svm.lambda = o.svm_lambda;
    b.svm.epochs = o.svm_epochs;
    b.svm.seed = derive_seed(o.seed, kBaselineStream, 1);
    return b;
}

json baseline_json(const BaselineOptions& b) {
    return {{"enabled", b.enabled},
            {"mlp", {{"hidden", b.mlp.hidden}, {"epochs", b.mlp.epochs}, {"learning_rate", b.mlp.learning_rate},
                     {"seed", b.mlp.seed}}},
            {"svm", {{"lambda", b.svm.lambda}, {"epochs", b.svm.epochs}, {"seed", b.svm.seed}}}};
}

json data_json(const Options& o, const Dataset& d) {
    return {{"path", o.data},
            {"layout", d.layout().name()},
            {"timepoints", d.layout().timepoints},
            {"samples", d.size()},
            {"features", d.n_features()},
            {"class0", d.count(0)},
            {"class1", d.count(1)}};
}

std::string method_name(const EvolutionConfig& c) { return c.genome.recurrent ? "RCGP" : "CGP"; }

// ---------------------------------------------------------------------------
// Run directories

std::string utc_stamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

class RunDir {
public:
    RunDir(const Options& o, const std::string& command) : root_(o.out) {
        std::string name = o.run_name.empty() ? command + "-" + utc_stamp() + "-" + std::to_string(o.seed) : o.run_name;
        path_ = root_ / name;
        for (int n = 2; fs::exists(path_); ++n) path_ = root_ / (name + "-" + std::to_string(n));
        fs::create_directories(path_);
    }

    const fs::path& path() const { return path_; }
    std::string file(const std::string& rel) const {
        const auto p = path_ / rel;
        fs::create_directories(p.parent_path());
        return p.string();
    }

    void mark_failed() const {
        std::error_code ec;
        fs::create_directories(root_ / "failed", ec);
        fs::rename(path_, root_ / "failed" / path_.filename(), ec);
        if (ec) std::cerr << "could not move partial output: " << ec.message() << "\n";
        else std::cerr << "partial output kept in " << (root_ / "failed" / path_.filename()).string() << "\n";
    }

private:
    fs::path root_;
    fs::path path_;
};

template <typename Body>
int with_run_dir(const Options& o, const std::string& command, Body&& body) {
    RunDir dir(o, command);
    try {
        body(dir);
    } catch (...) {
        dir.mark_failed();
        throw;
    }
    std::cout << "wrote " << dir.path().string() << "\n";
    return 0;
}

Dataset load_data(const Options& o) {
    if (o.data.empty()) throw Error(ErrorCode::InvalidConfig, "--data is required");
    return load_csv(o.data, layout_of(o));
}

int dry_run_report(const json& config) {
    std::cout << config.dump(2) << "\nconfig ok (dry run, nothing written)\n";
    return 0;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_gen_data(const Options& o) {
    GeneratorSpec spec;
    spec.n_minority = o.n_minority;
    spec.n_majority = o.n_majority;
    spec.layout = layout_of(o);
    spec.n_features = o.n_features;
    spec.noise_sd = o.noise_sd;
    spec.seed = o.seed;
    if (o.signal == "none") spec.signal = SignalKind::None;
    else if (o.signal == "mean-shift") spec.signal = SignalKind::MeanShift;
    else if (o.signal == "linear") spec.signal = SignalKind::Linear;
    else throw Error(ErrorCode::InvalidSpec, "unknown signal '" + o.signal + "'");
    spec.mean_shift = {o.delta, o.informative};
    spec.linear = {o.weights, o.threshold};
    spec.validate();
    if (o.dry_run)
        return dry_run_report({{"n_minority", spec.n_minority}, {"n_majority", spec.n_majority}, {"width", spec.width()}});
    const auto d = generate(spec);
    if (o.output.empty() || o.output == "-") {
        write_csv(std::cout, d);
    } else {
        save_csv(o.output, d);
        std::cerr << "wrote " << d.size() << " samples x " << d.n_features() << " features to " << o.output << "\n";
    }
    return 0;
}

int cmd_split(const Options& o) {
    const auto data = load_data(o);
    const auto spec = split_spec(o);
    json config{{"command", "split"}, {"seed", o.seed}, {"data", data_json(o, data)},
                {"split", {{"train", spec.train_frac}, {"validation", spec.val_frac}, {"test", spec.test_frac},
                           {"seed", spec.seed}}}};
    if (o.dry_run) return dry_run_report(config);
    return with_run_dir(o, "split", [&](const RunDir& dir) {
        write_json(dir.file("config.json"), config);
        const auto s = stratified_split(data, spec);
        write_json(dir.file("split.json"), split_manifest(s, spec));
        save_csv(dir.file("train.csv"), s.train);
        save_csv(dir.file("validation.csv"), s.val);
        save_csv(dir.file("test.csv"), s.test);
        std::ostringstream t;
        t << "partition,size,class0,class1\n";
        for (const auto* p : {&s.train, &s.val, &s.test})
            t << role_name(p->role()) << ',' << p->size() << ',' << p->count(0) << ',' << p->count(1) << '\n';
        write_text(dir.file("summary.csv"), t.str());
        std::cout << t.str();
    });
}

int cmd_balance(const Options& o) {
    const auto data = load_data(o).with_role(Role::Train);
    const auto cfg = adasyn_config(o);
    json config{{"command", "balance"}, {"seed", o.seed}, {"data", data_json(o, data)}, {"adasyn", to_json(cfg)}};
    if (o.dry_run) return dry_run_report(config);
    return with_run_dir(o, "balance", [&](const RunDir& dir) {
        write_json(dir.file("config.json"), config);
        const auto b = adasyn_balance(data, cfg);
        const auto merged = b.merged();
        save_csv(dir.file("balanced.csv"), merged, b.synthetic_mask());
        write_json(dir.file("provenance.json"), provenance_json(b));
        std::ostringstream t;
        t << "class,original,synthetic,final\n";
        for (int c = 0; c < 2; ++c) {
            const std::size_t syn = c == b.minority_label ? b.synthetic.size() : 0;
            t << c << ',' << data.count(c) << ',' << syn << ',' << merged.count(c) << '\n';
        }
        write_text(dir.file("summary.csv"), t.str());
        std::cout << t.str();
    });
}

std::string run_label(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "run%02zu", i);
    return buf;
}

int cmd_train(const Options& o) {
    const auto data = load_data(o);
    const auto spec = split_spec(o);
    const auto evo = evolution_config(o);
    const auto base = baseline_options(o);
    std::optional<AdasynConfig> balance;
    if (o.balance.value_or(false)) balance = adasyn_config(o);
    json config{{"command", "train"},
                {"seed", o.seed},
                {"data", data_json(o, data)},
                {"split", {{"train", spec.train_frac}, {"validation", spec.val_frac}, {"test", spec.test_frac},
                           {"seed", spec.seed}}},
                {"evolution", to_json(evo)},
                {"adasyn", balance ? to_json(*balance) : json(nullptr)},
                {"baselines", baseline_json(base)}};
    if (o.dry_run) return dry_run_report(config);
    return with_run_dir(o, "train", [&](const RunDir& dir) {
        write_json(dir.file("config.json"), config);
        auto split = stratified_split(data, spec);
        write_json(dir.file("split.json"), split_manifest(split, spec));
        json results;
        if (balance) {
            const auto b = adasyn_balance(split.train, *balance);
            results["balance"] = {{"synthetic", b.synthetic.size()}, {"minority_label", b.minority_label}};
            write_json(dir.file("provenance.json"), provenance_json(b));
            split.train = b.merged();
        }
        const auto batch = run_batch(split, evo, o.jobs);
        results["batch"] = to_json(batch);
        for (std::size_t i = 0; i < batch.runs.size(); ++i) {
            const auto& r = batch.runs[i];
            write_json(dir.file("genomes/" + run_label(i) + ".json"), genome_to_json(r.winning_genome, r.seed));
            write_text(dir.file("graphs/" + run_label(i) + ".dot"), to_dot(r.winning_genome));
        }
        std::vector<TableRow> rows{{method_name(evo), batch.summary.train, batch.summary.val, batch.summary.test}};
        if (base.enabled) {
            const auto mlp = train_mlp(split.train, split.val, base.mlp);
            const double mlp_test = model_accuracy(mlp.model, split.test);
            const auto svm = train_linear_svm(split.train, base.svm);
            const double svm_test = model_accuracy(svm.model, split.test);
            results["baselines"] = {{"mlp", {{"train_acc", mlp.train_acc}, {"val_acc", detail::opt(mlp.val_acc)},
                                             {"test_acc", mlp_test}}},
                                    {"svm", {{"train_acc", svm.train_acc}, {"test_acc", svm_test}}}};
            write_json(dir.file("models/mlp.json"), to_json(mlp.model, base.mlp));
            write_json(dir.file("models/svm.json"), to_json(svm.model, base.svm));
            auto single = [](double v) {
                const double one[] = {v};
                return summarize(one);
            };
            std::optional<Summary> mlp_val;
            if (mlp.val_acc) mlp_val = single(*mlp.val_acc);
            rows.push_back({"MLP", single(mlp.train_acc), mlp_val, single(mlp_test)});
            rows.push_back({"SVM", single(svm.train_acc), std::nullopt, single(svm_test)});
        }
        write_json(dir.file("results.json"), results);
        const auto table = summary_table(rows);
        write_text(dir.file("summary.csv"), table);
        std::cout << table;
    });
}

std::vector<TableRow> cv_rows(const CvResult& r) {
    std::vector<TableRow> rows{{method_name(r.evolution), r.summary.train, r.summary.val, r.summary.test},
                               {"Majority", std::nullopt, std::nullopt, r.majority}};
    if (r.mlp) rows.push_back({"MLP", r.mlp->train, r.mlp->val, r.mlp->test});
    if (r.svm) rows.push_back({"SVM", r.svm->train, std::nullopt, r.svm->test});
    return rows;
}

int cmd_cv(const Options& o) {
    const auto data = load_data(o);
    auto evo = evolution_config(o);
    const auto base = baseline_options(o);
    CvPlan plan;
    plan.k = o.k_folds;
    plan.repeats = o.repeats;
    plan.runs_per_cell = o.runs;
    plan.seed = derive_seed(o.seed, kFoldStream);
    if (o.balance.value_or(true)) plan.balance = adasyn_config(o);
    plan.validate();
    evo.n_runs = 1;
    json config{{"command", "cv"}, {"seed", o.seed}, {"data", data_json(o, data)}, {"plan", to_json(plan)},
                {"evolution", to_json(evo)}, {"baselines", baseline_json(base)}};
    if (o.dry_run) return dry_run_report(config);
    return with_run_dir(o, "cv", [&](const RunDir& dir) {
        write_json(dir.file("config.json"), config);
        const auto r = run_cv(data, plan, evo, o.jobs, base);
        write_json(dir.file("results.json"), to_json(r));
        write_text(dir.file("cells.csv"), cells_table(r));
        const auto table = summary_table(cv_rows(r));
        write_text(dir.file("summary.csv"), table);
        std::cout << table;
    });
}

int cmd_decode(const Options& o) {
    const auto g = load_genome(o.genome);
    if (o.dry_run) return dry_run_report(genome_to_json(g));
    const auto active = active_nodes(g);
    std::cout << to_expression(g) << "\n";
    std::cout << "uses " << active.inputs.size() << " of " << g.config.n_inputs << " inputs\n";
    std::cout << "active nodes: " << active.nodes.size() << " of " << g.config.n_nodes << "\n";
    if (!active.inputs.empty()) {
        std::cout << "inputs:";
        for (auto i : active.inputs) std::cout << " x" << i;
        std::cout << "\n";
    }
    const std::string dot = o.dot.empty() ? fs::path(o.genome).replace_extension(".dot").string() : o.dot;
    write_text(dot, to_dot(g));
    std::cout << "graph: " << dot << "\n";
    if (!o.json_out.empty()) write_json(o.json_out, genome_to_json(g));
    return 0;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, path + ": " + e.what());
    }
}

std::optional<Summary> summary_of(const json& j) {
    if (j.is_null() || j.value("n", std::size_t{0}) == 0) return std::nullopt;
    Summary s;
    s.mean = j.at("mean").get<double>();
    s.sd = j.at("sd").get<double>();
    s.min = j.at("min").get<double>();
    s.max = j.at("max").get<double>();
    s.n = j.at("n").get<std::size_t>();
    s.sd_defined = j.at("sd_defined").get<bool>();
    return s;
}

int cmd_report(const Options& o) {
    fs::path p = o.results;
    if (fs::is_directory(p)) p /= "results.json";
    const auto j = read_json_file(p.string());
    std::vector<TableRow> rows;
    auto partition_row = [](const std::string& name, const json& s) {
        return TableRow{name, summary_of(s.value("train", json())), summary_of(s.value("validation", json())),
                        summary_of(s.value("test", json()))};
    };
    if (j.contains("cells")) {
        const auto& s = j.at("summary");
        const bool rec = j.at("evolution").at("recurrent").get<bool>();
        rows.push_back(partition_row(rec ? "RCGP" : "CGP", s));
        rows.push_back({"Majority", std::nullopt, std::nullopt, summary_of(s.at("majority_test"))});
        if (s.contains("mlp")) rows.push_back(partition_row("MLP", s.at("mlp")));
        if (s.contains("svm")) rows.push_back(partition_row("SVM", s.at("svm")));
        std::cout << "cv: " << j.at("cells").size() << " cells\n";
    } else if (j.contains("batch")) {
        const auto& b = j.at("batch");
        const bool rec = b.at("config").at("recurrent").get<bool>();
        rows.push_back(partition_row(rec ? "RCGP" : "CGP", b.at("summary")));
        if (j.contains("baselines")) {
            auto single = [](const json& v) -> std::optional<Summary> {
                if (v.is_null()) return std::nullopt;
                const double one[] = {v.get<double>()};
                return summarize(one);
            };
            const auto& m = j.at("baselines").at("mlp");
            const auto& s = j.at("baselines").at("svm");
            rows.push_back({"MLP", single(m.at("train_acc")), single(m.at("val_acc")), single(m.at("test_acc"))});
            rows.push_back({"SVM", single(s.at("train_acc")), std::nullopt, single(s.at("test_acc"))});
        }
        std::cout << "train: " << b.at("runs").size() << " runs\n";
        for (const auto& r : b.at("runs"))
            std::cout << "  seed " << r.at("seed").get<std::uint64_t>() << "  train " << r.at("train_acc").dump()
                      << "  test " << r.at("test_acc").dump() << "  iterations " << r.at("iterations_used").dump()
                      << "\n";
    } else {
        throw Error(ErrorCode::InvalidConfig, p.string() + " is not a train or cv results file");
    }
    std::cout << summary_table(rows);
    return 0;
}

// ---------------------------------------------------------------------------
// Argument wiring

void add_data(CLI::App* c, Options& o) {
    c->add_option("--data", o.data, "input CSV (id, group, label, features)")->check(CLI::ExistingFile);
    c->add_option("--layout", o.layout, "pcc|mpfc|ripc|lipc|four-column|single-vector|dcm16|generic")
        ->capture_default_str();
    c->add_option("--timepoints", o.timepoints, "samples per region for timeseries layouts")->capture_default_str();
}

void add_common(CLI::App* c, Options& o) {
    c->add_option("--seed", o.seed, "master seed")->capture_default_str();
    c->add_option("--config", "INI config; command-line flags override it");
    c->add_flag("--dry-run", o.dry_run, "validate the configuration and exit without writing");
}

void add_output(CLI::App* c, Options& o) {
    c->add_option("--out", o.out, "output root")->capture_default_str();
    c->add_option("--run-name", o.run_name, "directory name instead of <command>-<timestamp>-<seed>");
}

void add_split(CLI::App* c, Options& o) {
    c->add_option("--train-frac", o.train_frac)->capture_default_str();
    c->add_option("--val-frac", o.val_frac)->capture_default_str();
    c->add_option("--test-frac", o.test_frac)->capture_default_str();
}

void add_adasyn(CLI::App* c, Options& o, bool balance_default) {
    c->add_flag("--balance,!--no-balance", o.balance,
                std::string("ADASYN-balance the training portion [") + (balance_default ? "on" : "off") + "]");
    c->add_option("--k-neighbors", o.k_neighbors)->capture_default_str();
    c->add_option("--beta", o.beta, "1 = full balance")->capture_default_str();
    c->add_flag("--normalize", o.normalize, "z-score features for the neighbour search");
}

void add_evolution(CLI::App* c, Options& o) {
    c->add_option("--recurrent", o.recurrent, "RCGP genome (true|false)")->capture_default_str();
    c->add_option("--recurrent-prob", o.recurrent_prob, "feedback-connection probability [0.1 with --recurrent]");
    c->add_option("--mutation-rate", o.mutation_rate)->capture_default_str();
    c->add_option("--iterations", o.iterations)->capture_default_str();
    c->add_option("--lambda", o.lambda, "offspring per generation")->capture_default_str();
    c->add_option("--nodes", o.nodes)->capture_default_str();
    c->add_option("--mode", o.mode, "wide|streamed")->capture_default_str();
    c->add_flag("--select-on-validation", o.select_on_validation, "also track the best-validation genome");
    c->add_option("--jobs", o.jobs, "concurrent runs / cells")->capture_default_str();
}

void add_baselines(CLI::App* c, Options& o) {
    c->add_flag("--baselines", o.baselines, "also train the MLP and linear SVM");
    c->add_option("--hidden", o.hidden)->capture_default_str();
    c->add_option("--mlp-epochs", o.mlp_epochs)->capture_default_str();
    c->add_option("--learning-rate", o.learning_rate)->capture_default_str();
    c->add_option("--svm-lambda", o.svm_lambda)->capture_default_str();
    c->add_option("--svm-epochs", o.svm_epochs)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CGP / RCGP binary classification toolkit", "cgpclf"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Options o;

    auto* gen = app.add_subcommand("gen-data", "write a synthetic dataset");
    add_common(gen, o);
    gen->add_option("--layout", o.layout)->capture_default_str();
    gen->add_option("--timepoints", o.timepoints)->capture_default_str();
    gen->add_option("--n-minority", o.n_minority, "class-1 samples")->capture_default_str();
    gen->add_option("--n-majority", o.n_majority, "class-0 samples")->capture_default_str();
    gen->add_option("--features", o.n_features, "width for the generic layout");
    gen->add_option("--signal", o.signal, "none|mean-shift|linear")->capture_default_str();
    gen->add_option("--delta", o.delta, "mean shift of class 1")->capture_default_str();
    gen->add_option("--informative", o.informative, "shifted feature indices")->delimiter(',');
    gen->add_option("--weights", o.weights, "linear rule weights")->delimiter(',');
    gen->add_option("--threshold", o.threshold, "linear rule threshold")->capture_default_str();
    gen->add_option("--noise-sd", o.noise_sd)->capture_default_str();
    gen->add_option("-o,--output", o.output, "CSV path (stdout if omitted)");

    auto* split = app.add_subcommand("split", "stratified train/validation/test split");
    add_common(split, o);
    add_data(split, o);
    add_output(split, o);
    add_split(split, o);

    auto* balance = app.add_subcommand("balance", "ADASYN-oversample a training CSV");
    add_common(balance, o);
    add_data(balance, o);
    add_output(balance, o);
    add_adasyn(balance, o, true);

    auto* train = app.add_subcommand("train", "split, optionally balance, and evolve n runs");
    add_common(train, o);
    add_data(train, o);
    add_output(train, o);
    add_split(train, o);
    add_adasyn(train, o, false);
    add_evolution(train, o);
    add_baselines(train, o);
    train->add_option("--runs", o.runs, "independent evolutionary runs")->capture_default_str();

    auto* cv = app.add_subcommand("cv", "repeated stratified k-fold cross-validation");
    add_common(cv, o);
    add_data(cv, o);
    add_output(cv, o);
    add_adasyn(cv, o, true);
    add_evolution(cv, o);
    add_baselines(cv, o);
    cv->add_option("--k-folds", o.k_folds)->capture_default_str();
    cv->add_option("--repeats", o.repeats)->capture_default_str();
    cv->add_option("--runs", o.runs, "runs per cell")->default_val(1);

    auto* decode = app.add_subcommand("decode", "print a genome's expression and write its graph");
    add_common(decode, o);
    decode->add_option("genome", o.genome, "genome JSON")->required();
    decode->add_option("--dot", o.dot, "DOT path [genome path with .dot]");
    decode->add_option("--json", o.json_out, "re-serialized genome JSON");

    auto* report = app.add_subcommand("report", "summarize a train or cv results file");
    add_common(report, o);
    report->add_option("results", o.results, "results.json or its run directory")->required();

    std::vector<std::string> args;
    try {
        args = merged_arguments(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*gen) return cmd_gen_data(o);
        if (*split) return cmd_split(o);
        if (*balance) return cmd_balance(o);
        if (*train) return cmd_train(o);
        if (*cv) return cmd_cv(o);
        if (*decode) return cmd_decode(o);
        if (*report) return cmd_report(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
