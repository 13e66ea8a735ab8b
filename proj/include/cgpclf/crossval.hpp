// Repeated stratified k-fold cross-validation. In every cell one fold is
// the test set, the next fold (cyclically) is the validation set and the
// rest train; optional ADASYN touches the training portion only.
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cgpclf/adasyn.hpp"
#include "cgpclf/baselines.hpp"
#include "cgpclf/common.hpp"
#include "cgpclf/dataset.hpp"
#include "cgpclf/evolution.hpp"

namespace cgpclf {

struct CvPlan {
    std::size_t k = 10;
    std::size_t repeats = 10;
    std::uint64_t seed = 0;
    std::optional<AdasynConfig> balance;
    std::size_t runs_per_cell = 1;

    void validate() const {
        if (k < 3) throw Error(ErrorCode::InvalidConfig, "k must be at least 3 (test, validation and training folds)");
        if (repeats == 0) throw Error(ErrorCode::InvalidConfig, "repeats must be at least 1");
        if (runs_per_cell == 0) throw Error(ErrorCode::InvalidConfig, "runs_per_cell must be at least 1");
        if (balance) balance->validate();
    }
};

using Fold = std::vector<std::size_t>;  // ascending dataset indices

/// Each class is shuffled and dealt round-robin; the dealing position carries
/// over from class 0 to class 1 so overall fold sizes also differ by at most one.
inline std::vector<Fold> make_folds(const Dataset& data, std::size_t k, std::uint64_t seed) {
    if (k == 0) throw Error(ErrorCode::InvalidConfig, "k must be positive");
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < data.size(); ++i) by_class[data[i].label].push_back(i);
    for (int c = 0; c < 2; ++c)
        if (by_class[c].size() < k)
            throw Error(ErrorCode::ClassSmallerThanK, "class " + std::to_string(c) + " has " +
                                                          std::to_string(by_class[c].size()) + " samples, k = " +
                                                          std::to_string(k));
    Rng rng(seed);
    std::vector<Fold> folds(k);
    std::size_t cursor = 0;
    for (auto& members : by_class) {
        shuffle(members, rng);
        for (auto i : members) {
            folds[cursor].push_back(i);
            cursor = (cursor + 1) % k;
        }
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

inline std::size_t validation_fold(std::size_t test_fold, std::size_t k) { return (test_fold + 1) % k; }

struct CellData {
    Dataset train;  // after balancing, when enabled
    Dataset val;
    Dataset test;
    std::size_t n_original_train = 0;
    std::size_t n_synthetic = 0;
    int train_majority_label = 0;  // of the unbalanced training portion; ties go to 0
};

inline CellData assemble_cell(const Dataset& data, const std::vector<Fold>& folds, std::size_t test_fold,
                              const std::optional<AdasynConfig>& balance, std::uint64_t balance_seed) {
    const std::size_t k = folds.size();
    const std::size_t val_fold = validation_fold(test_fold, k);
    std::vector<std::size_t> tr;
    for (std::size_t f = 0; f < k; ++f)
        if (f != test_fold && f != val_fold) tr.insert(tr.end(), folds[f].begin(), folds[f].end());
    std::sort(tr.begin(), tr.end());

    CellData c;
    c.val = data.subset(folds[val_fold], Role::Validation);
    c.test = data.subset(folds[test_fold], Role::Test);
    Dataset train = data.subset(tr, Role::Train);
    c.n_original_train = train.size();
    c.train_majority_label = train.count(1) > train.count(0) ? 1 : 0;
    if (balance) {
        auto cfg = *balance;
        cfg.seed = balance_seed;
        auto balanced = adasyn_balance(train, cfg);
        c.n_synthetic = balanced.synthetic.size();
        c.train = balanced.merged();
    } else {
        c.train = std::move(train);
    }
    return c;
}

struct BaselineOptions {
    bool enabled = false;
    MlpConfig mlp;
    SvmConfig svm;
};

struct CvCell {
    std::size_t repeat = 0;
    std::size_t fold = 0;
    std::uint64_t seed = 0;
    double train_acc = 0.0;  // mean over runs_per_cell
    double val_acc = 0.0;
    double test_acc = 0.0;
    std::size_t train_class0 = 0;  // training counts seen by evolution
    std::size_t train_class1 = 0;
    std::size_t val_size = 0;
    std::size_t test_size = 0;
    std::size_t n_synthetic = 0;
    double majority_test_acc = 0.0;
    std::vector<RunResult> runs;

    std::optional<double> mlp_train_acc, mlp_val_acc, mlp_test_acc;
    std::optional<double> svm_train_acc, svm_test_acc;
};

struct CvResult {
    CvPlan plan;
    EvolutionConfig evolution;
    std::vector<CvCell> cells;  // ordered by (repeat, fold)
    PartitionSummary summary;
    Summary majority;
    std::optional<PartitionSummary> mlp;
    std::optional<PartitionSummary> svm;  // val left empty
};

inline std::uint64_t fold_seed(const CvPlan& plan, std::size_t repeat) { return derive_seed(plan.seed, repeat); }

inline std::uint64_t cell_seed(const EvolutionConfig& evo, std::size_t repeat, std::size_t fold) {
    return derive_seed(evo.seed, repeat, fold);
}

inline std::uint64_t cell_balance_seed(const CvPlan& plan, std::size_t repeat, std::size_t fold) {
    return derive_seed(plan.balance ? plan.balance->seed : plan.seed, 0xada5, repeat * 100003 + fold);
}

inline PartitionSummary summarize_cells(const std::vector<CvCell>& cells) {
    std::vector<double> tr, va, te;
    for (const auto& c : cells) {
        tr.push_back(c.train_acc);
        va.push_back(c.val_acc);
        te.push_back(c.test_acc);
    }
    return {summarize(tr), summarize(va), summarize(te)};
}

inline CvResult run_cv(const Dataset& data, const CvPlan& plan, const EvolutionConfig& evo, std::size_t jobs = 1,
                       const BaselineOptions& baselines = {}) {
    plan.validate();
    evo.validate();
    std::vector<std::vector<Fold>> folds(plan.repeats);
    for (std::size_t r = 0; r < plan.repeats; ++r) folds[r] = make_folds(data, plan.k, fold_seed(plan, r));

    CvResult out;
    out.plan = plan;
    out.evolution = evo;
    out.cells.resize(plan.repeats * plan.k);
    parallel_for(out.cells.size(), jobs, [&](std::size_t idx) {
        const std::size_t r = idx / plan.k, f = idx % plan.k;
        const auto cd = assemble_cell(data, folds[r], f, plan.balance, cell_balance_seed(plan, r, f));
        CvCell c;
        c.repeat = r;
        c.fold = f;
        c.seed = cell_seed(evo, r, f);
        c.train_class0 = cd.train.count(0);
        c.train_class1 = cd.train.count(1);
        c.val_size = cd.val.size();
        c.test_size = cd.test.size();
        c.n_synthetic = cd.n_synthetic;
        c.majority_test_acc =
            static_cast<double>(cd.test.count(cd.train_majority_label)) / static_cast<double>(cd.test.size());
        for (std::size_t run = 0; run < plan.runs_per_cell; ++run) {
            const auto seed = plan.runs_per_cell == 1 ? c.seed : derive_seed(c.seed, run);
            c.runs.push_back(evolve(cd.train, cd.val, cd.test, evo, seed));
        }
        const auto s = summarize_runs(c.runs);
        c.train_acc = s.train.mean;
        c.val_acc = s.val.mean;
        c.test_acc = s.test.mean;
        if (baselines.enabled) {
            auto mc = baselines.mlp;
            mc.seed = derive_seed(c.seed, 0x31a);
            const auto mlp = train_mlp(cd.train, cd.val, mc);
            c.mlp_train_acc = mlp.train_acc;
            c.mlp_val_acc = mlp.val_acc;
            c.mlp_test_acc = model_accuracy(mlp.model, cd.test);
            auto sc = baselines.svm;
            sc.seed = derive_seed(c.seed, 0x5a3);
            const auto svm = train_linear_svm(cd.train, sc);
            c.svm_train_acc = svm.train_acc;
            c.svm_test_acc = model_accuracy(svm.model, cd.test);
        }
        out.cells[idx] = std::move(c);
    });

    out.summary = summarize_cells(out.cells);
    std::vector<double> maj;
    for (const auto& c : out.cells) maj.push_back(c.majority_test_acc);
    out.majority = summarize(maj);
    if (baselines.enabled) {
        std::vector<double> mt, mv, ms, st, ss;
        for (const auto& c : out.cells) {
            mt.push_back(*c.mlp_train_acc);
            if (c.mlp_val_acc) mv.push_back(*c.mlp_val_acc);
            ms.push_back(*c.mlp_test_acc);
            st.push_back(*c.svm_train_acc);
            ss.push_back(*c.svm_test_acc);
        }
        out.mlp = PartitionSummary{summarize(mt), summarize(mv), summarize(ms)};
        out.svm = PartitionSummary{summarize(st), Summary{}, summarize(ss)};
    }
    return out;
}

}  // namespace cgpclf
