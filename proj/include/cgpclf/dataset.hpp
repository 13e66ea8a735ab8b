// Labeled sample collections, the four feature layouts, CSV ingestion and
// stratified splitting.
#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cgpclf/common.hpp"

namespace cgpclf {

// ---------------------------------------------------------------------------
// Layouts

/// The four default-mode-network regions. The enumerator order is the
/// canonical region-major order used by the combined layouts.
enum class Region { PCC = 0, MPFC = 1, RIPC = 2, LIPC = 3 };

inline constexpr std::array<Region, 4> kRegionOrder{Region::PCC, Region::MPFC, Region::RIPC,
                                                     Region::LIPC};

inline constexpr std::size_t kRegionCount = kRegionOrder.size();
inline constexpr std::size_t kDefaultTimepoints = 145;
inline constexpr std::size_t kDcmFeatures = 16;

inline std::string_view region_name(Region r) {
    switch (r) {
        case Region::PCC: return "pcc";
        case Region::MPFC: return "mpfc";
        case Region::RIPC: return "ripc";
        case Region::LIPC: return "lipc";
    }
    return "?";
}

inline std::optional<Region> parse_region(std::string_view name) {
    for (Region r : kRegionOrder)
        if (region_name(r) == name) return r;
    return std::nullopt;
}

enum class LayoutMode { PerRegion, FourColumn, SingleVector, Dcm16, Generic };

/// Describes how a sample's feature vector is organised.
///
/// FourColumn and SingleVector share the same region-major storage
/// (pcc[0..T), mpfc[0..T), ripc[0..T), lipc[0..T)); they differ only in how
/// streamed execution slices the vector into frames. Generic carries no
/// shape constraint and is used for synthetic toy problems.
struct LayoutDescriptor {
    LayoutMode mode = LayoutMode::Generic;
    Region region = Region::PCC;  // meaningful for PerRegion only
    std::size_t timepoints = kDefaultTimepoints;

    static LayoutDescriptor per_region(Region r, std::size_t t = kDefaultTimepoints) {
        return {LayoutMode::PerRegion, r, t};
    }
    static LayoutDescriptor four_column(std::size_t t = kDefaultTimepoints) {
        return {LayoutMode::FourColumn, Region::PCC, t};
    }
    static LayoutDescriptor single_vector(std::size_t t = kDefaultTimepoints) {
        return {LayoutMode::SingleVector, Region::PCC, t};
    }
    static LayoutDescriptor dcm16() { return {LayoutMode::Dcm16, Region::PCC, 1}; }
    static LayoutDescriptor generic() { return {LayoutMode::Generic, Region::PCC, 1}; }

    /// Required feature count, or nullopt for Generic.
    std::optional<std::size_t> expected_features() const {
        switch (mode) {
            case LayoutMode::PerRegion: return timepoints;
            case LayoutMode::FourColumn:
            case LayoutMode::SingleVector: return kRegionCount * timepoints;
            case LayoutMode::Dcm16: return kDcmFeatures;
            case LayoutMode::Generic: return std::nullopt;
        }
        return std::nullopt;
    }

    bool is_timeseries() const {
        return mode == LayoutMode::PerRegion || mode == LayoutMode::FourColumn ||
               mode == LayoutMode::SingleVector;
    }

    /// Inputs per frame when the vector is fed over time.
    std::size_t stream_width() const { return mode == LayoutMode::FourColumn ? kRegionCount : 1; }

    /// CLI-style name: pcc|mpfc|ripc|lipc|four-column|single-vector|dcm16|generic.
    std::string name() const {
        switch (mode) {
            case LayoutMode::PerRegion: return std::string(region_name(region));
            case LayoutMode::FourColumn: return "four-column";
            case LayoutMode::SingleVector: return "single-vector";
            case LayoutMode::Dcm16: return "dcm16";
            case LayoutMode::Generic: return "generic";
        }
        return "generic";
    }

    static LayoutDescriptor parse(std::string_view name, std::size_t t = kDefaultTimepoints) {
        if (auto r = parse_region(name)) return per_region(*r, t);
        if (name == "four-column") return four_column(t);
        if (name == "single-vector") return single_vector(t);
        if (name == "dcm16") return dcm16();
        if (name == "generic") return generic();
        throw Error(ErrorCode::InvalidConfig, "unknown layout '" + std::string(name) + "'");
    }

    friend bool operator==(const LayoutDescriptor&, const LayoutDescriptor&) = default;
};

/// Column header for feature j under a layout.
inline std::string feature_name(const LayoutDescriptor& layout, std::size_t j) {
    if (layout.mode == LayoutMode::PerRegion)
        return std::string(region_name(layout.region)) + "_t" + std::to_string(j);
    if (layout.mode == LayoutMode::FourColumn || layout.mode == LayoutMode::SingleVector) {
        const auto r = kRegionOrder[j / layout.timepoints];
        return std::string(region_name(r)) + "_t" + std::to_string(j % layout.timepoints);
    }
    return "f" + std::to_string(j);
}

// ---------------------------------------------------------------------------
// Dataset

enum class Role { Unassigned, Train, Validation, Test };

inline std::string_view role_name(Role r) {
    switch (r) {
        case Role::Unassigned: return "unassigned";
        case Role::Train: return "train";
        case Role::Validation: return "validation";
        case Role::Test: return "test";
    }
    return "?";
}

struct Sample {
    std::string id;
    std::string group;
    int label = 0;
    std::vector<double> features;

    friend bool operator==(const Sample&, const Sample&) = default;
};

/// Immutable labeled sample collection. Construction validates feature
/// lengths, labels, id uniqueness and the layout contract.
class Dataset {
public:
    Dataset() = default;

    Dataset(std::vector<Sample> samples, std::size_t n_features, LayoutDescriptor layout,
            Role role = Role::Unassigned)
        : samples_(std::move(samples)), n_features_(n_features), layout_(layout), role_(role) {
        validate();
    }

    /// Infers n_features from the first sample (or the layout when empty).
    Dataset(std::vector<Sample> samples, LayoutDescriptor layout, Role role = Role::Unassigned)
        : samples_(std::move(samples)),
          n_features_(infer_width(samples_, layout)),
          layout_(layout),
          role_(role) {
        validate();
    }

    std::span<const Sample> samples() const { return samples_; }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    std::size_t n_features() const { return n_features_; }
    const LayoutDescriptor& layout() const { return layout_; }
    Role role() const { return role_; }

    std::size_t count(int label) const {
        std::size_t n = 0;
        for (const auto& s : samples_) n += (s.label == label);
        return n;
    }

    /// Samples at `indices` (in the given order), tagged with `role`.
    Dataset subset(std::span<const std::size_t> indices, Role role) const {
        std::vector<Sample> out;
        out.reserve(indices.size());
        for (auto i : indices) out.push_back(samples_.at(i));
        return Dataset(std::move(out), n_features_, layout_, role);
    }

    Dataset with_role(Role role) const { return Dataset(samples_, n_features_, layout_, role); }

    std::vector<std::string> ids() const {
        std::vector<std::string> v;
        v.reserve(samples_.size());
        for (const auto& s : samples_) v.push_back(s.id);
        return v;
    }

    friend bool operator==(const Dataset& a, const Dataset& b) {
        return a.n_features_ == b.n_features_ && a.layout_ == b.layout_ && a.samples_ == b.samples_;
    }

private:
    static std::size_t infer_width(const std::vector<Sample>& samples, const LayoutDescriptor& layout) {
        if (!samples.empty()) return samples.front().features.size();
        return layout.expected_features().value_or(0);
    }

    void validate() const {
        if (n_features_ == 0) throw Error(ErrorCode::LayoutMismatch, "n_features must be positive");
        if (auto want = layout_.expected_features(); want && *want != n_features_)
            throw Error(ErrorCode::LayoutMismatch,
                        "layout " + layout_.name() + " expects " + std::to_string(*want) +
                            " features, got " + std::to_string(n_features_));
        std::unordered_set<std::string_view> seen;
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            const auto& s = samples_[i];
            if (s.features.size() != n_features_)
                throw Error(ErrorCode::LayoutMismatch, "sample '" + s.id + "' has " +
                                                           std::to_string(s.features.size()) +
                                                           " features, expected " +
                                                           std::to_string(n_features_));
            if (s.label != 0 && s.label != 1)
                throw Error(ErrorCode::NonBinaryLabel, "sample '" + s.id + "' has label " +
                                                           std::to_string(s.label));
            if (!seen.insert(s.id).second)
                throw Error(ErrorCode::DuplicateId, "duplicate sample id '" + s.id + "'");
        }
    }

    std::vector<Sample> samples_;
    std::size_t n_features_ = 0;
    LayoutDescriptor layout_;
    Role role_ = Role::Unassigned;
};

// ---------------------------------------------------------------------------
// Building layouts from per-region timeseries

/// One subject/run: a series per region, in kRegionOrder.
struct RegionSeries {
    std::string id;
    std::string group;
    int label = 0;
    std::vector<std::vector<double>> regions;
};

inline Dataset build_layout(std::span<const RegionSeries> raw, const LayoutDescriptor& layout) {
    if (!layout.is_timeseries())
        throw Error(ErrorCode::LayoutMismatch, "build_layout needs a timeseries layout");
    std::vector<Sample> samples;
    samples.reserve(raw.size());
    for (const auto& r : raw) {
        if (r.regions.size() != kRegionCount)
            throw Error(ErrorCode::RegionCountMismatch, "sample '" + r.id + "' has " +
                                                            std::to_string(r.regions.size()) +
                                                            " regions, expected 4");
        for (const auto& series : r.regions)
            if (series.size() != layout.timepoints)
                throw Error(ErrorCode::TimepointMismatch,
                            "sample '" + r.id + "' has a region with " +
                                std::to_string(series.size()) + " timepoints, expected " +
                                std::to_string(layout.timepoints));
        Sample s{r.id, r.group, r.label, {}};
        if (layout.mode == LayoutMode::PerRegion) {
            s.features = r.regions[static_cast<std::size_t>(layout.region)];
        } else {
            s.features.reserve(kRegionCount * layout.timepoints);
            for (const auto& series : r.regions)
                s.features.insert(s.features.end(), series.begin(), series.end());
        }
        samples.push_back(std::move(s));
    }
    return Dataset(std::move(samples), *layout.expected_features(), layout);
}

/// Slices a feature vector into the frames used by streamed execution.
/// FourColumn yields T frames of (pcc[t], mpfc[t], ripc[t], lipc[t]); every
/// other layout yields one value per frame in storage order.
inline std::vector<std::vector<double>> to_frames(std::span<const double> features,
                                                  const LayoutDescriptor& layout) {
    std::vector<std::vector<double>> frames;
    if (layout.mode == LayoutMode::FourColumn) {
        const std::size_t t_count = features.size() / kRegionCount;
        frames.reserve(t_count);
        for (std::size_t t = 0; t < t_count; ++t) {
            std::vector<double> f(kRegionCount);
            for (std::size_t r = 0; r < kRegionCount; ++r) f[r] = features[r * t_count + t];
            frames.push_back(std::move(f));
        }
    } else {
        frames.reserve(features.size());
        for (double v : features) frames.push_back({v});
    }
    return frames;
}

// ---------------------------------------------------------------------------
// CSV

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        auto cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r'))
            cell.remove_suffix(1);
        cells.emplace_back(cell);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

/// Shortest round-trip decimal form.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    // from_chars rejects a leading '+', strtod accepts inf/nan spellings; use strtod
    // and reject anything non-finite afterwards.
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

struct TaggedColumn {
    Region region;
    std::size_t t;
};

inline std::optional<TaggedColumn> parse_tagged(std::string_view name) {
    const auto us = name.find("_t");
    if (us == std::string_view::npos) return std::nullopt;
    auto r = parse_region(name.substr(0, us));
    if (!r) return std::nullopt;
    std::size_t t = 0;
    const auto digits = name.substr(us + 2);
    if (digits.empty()) return std::nullopt;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t);
    if (ec != std::errc{} || p != digits.data() + digits.size()) return std::nullopt;
    return TaggedColumn{*r, t};
}

}  // namespace detail

struct CsvOptions {
    std::string label_column = "label";
    std::string id_column = "id";
    std::string group_column = "group";
    std::string synthetic_column = "synthetic";  // marker written by balancing exports; skipped
};

/// Parses a sample table. Region-tagged columns (pcc_t0, mpfc_t0, ...) are
/// reordered into canonical region-major order, and for a PerRegion layout
/// only that region's columns are kept; other columns are used in file order.
inline Dataset read_csv(std::istream& in, const LayoutDescriptor& layout, const CsvOptions& opt = {}) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::EmptyDataset, "missing header row");
    const auto header = detail::split_csv_line(line);

    std::optional<std::size_t> id_col, label_col, group_col;
    std::vector<std::size_t> feature_cols;
    std::vector<std::optional<detail::TaggedColumn>> tags;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const auto& h = header[c];
        if (h == opt.id_column) id_col = c;
        else if (h == opt.label_column) label_col = c;
        else if (h == opt.group_column) group_col = c;
        else if (h == opt.synthetic_column) continue;
        else {
            feature_cols.push_back(c);
            tags.push_back(detail::parse_tagged(h));
        }
    }
    if (!id_col) throw Error(ErrorCode::MissingColumn, "no '" + opt.id_column + "' column");
    if (!label_col) throw Error(ErrorCode::MissingColumn, "no '" + opt.label_column + "' column");
    if (feature_cols.empty()) throw Error(ErrorCode::MissingColumn, "no feature columns");

    // Decide which feature columns feed the vector, and in what order.
    std::vector<std::size_t> order;  // positions into feature_cols
    const bool all_tagged =
        std::all_of(tags.begin(), tags.end(), [](const auto& t) { return t.has_value(); });
    if (all_tagged && layout.is_timeseries()) {
        std::map<std::pair<int, std::size_t>, std::size_t> by_key;
        for (std::size_t p = 0; p < tags.size(); ++p) {
            const auto key = std::make_pair(static_cast<int>(tags[p]->region), tags[p]->t);
            if (!by_key.emplace(key, p).second)
                throw Error(ErrorCode::LayoutMismatch, "duplicate column '" + header[feature_cols[p]] + "'");
        }
        auto take_region = [&](Region r) {
            for (std::size_t t = 0; t < layout.timepoints; ++t) {
                auto it = by_key.find({static_cast<int>(r), t});
                if (it == by_key.end())
                    throw Error(ErrorCode::LayoutMismatch,
                                "missing column " + std::string(region_name(r)) + "_t" + std::to_string(t));
                order.push_back(it->second);
            }
        };
        if (layout.mode == LayoutMode::PerRegion) {
            take_region(layout.region);
        } else {
            for (Region r : kRegionOrder) take_region(r);
            if (order.size() != tags.size())
                throw Error(ErrorCode::LayoutMismatch, "region-tagged columns exceed " +
                                                           std::to_string(layout.timepoints) +
                                                           " timepoints per region");
        }
    } else {
        for (std::size_t p = 0; p < feature_cols.size(); ++p) order.push_back(p);
    }
    if (auto want = layout.expected_features(); want && *want != order.size())
        throw Error(ErrorCode::LayoutMismatch, "layout " + layout.name() + " expects " +
                                                   std::to_string(*want) + " features, file has " +
                                                   std::to_string(order.size()));

    std::vector<Sample> samples;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++row;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size())
            throw Error(ErrorCode::LayoutMismatch, "row " + std::to_string(row) + " has " +
                                                       std::to_string(cells.size()) + " cells, header has " +
                                                       std::to_string(header.size()));
        Sample s;
        s.id = cells[*id_col];
        if (group_col) s.group = cells[*group_col];
        const auto& lab = cells[*label_col];
        if (lab == "0") s.label = 0;
        else if (lab == "1") s.label = 1;
        else throw Error(ErrorCode::NonBinaryLabel, "row " + std::to_string(row) + " label '" + lab + "'");
        s.features.reserve(order.size());
        for (auto p : order) {
            const auto c = feature_cols[p];
            auto v = detail::parse_double(cells[c]);
            if (!v || !std::isfinite(*v))
                throw Error(ErrorCode::NonFiniteFeature,
                            "row " + std::to_string(row) + ", column " + header[c] + " ('" + cells[c] + "')");
            s.features.push_back(*v);
        }
        samples.push_back(std::move(s));
    }
    if (samples.empty()) throw Error(ErrorCode::EmptyDataset, "no data rows");
    return Dataset(std::move(samples), order.size(), layout);
}

inline Dataset load_csv(const std::string& path, const LayoutDescriptor& layout,
                        const CsvOptions& opt = {}) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    return read_csv(in, layout, opt);
}

/// Writes the schema read_csv accepts. `synthetic`, when given, adds a
/// marker column with one 0/1 flag per sample.
inline void write_csv(std::ostream& out, const Dataset& data, const std::vector<bool>& synthetic = {}) {
    out << "id,group,label";
    if (!synthetic.empty() && synthetic.size() != data.size())
        throw Error(ErrorCode::InputLengthMismatch, "synthetic mask length differs from the dataset size");
    if (!synthetic.empty()) out << ",synthetic";
    for (std::size_t j = 0; j < data.n_features(); ++j) out << ',' << feature_name(data.layout(), j);
    out << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& s = data[i];
        out << s.id << ',' << s.group << ',' << s.label;
        if (!synthetic.empty()) out << ',' << (synthetic[i] ? 1 : 0);
        for (double v : s.features) out << ',' << detail::format_double(v);
        out << '\n';
    }
}

inline void save_csv(const std::string& path, const Dataset& data, const std::vector<bool>& synthetic = {}) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    write_csv(out, data, synthetic);
}

// ---------------------------------------------------------------------------
// Stratified splitting

struct SplitSpec {
    double train_frac = 0.70;
    double val_frac = 0.15;
    double test_frac = 0.15;
    std::uint64_t seed = 0;

    void validate() const {
        for (double f : {train_frac, val_frac, test_frac})
            if (!(f >= 0.0 && f <= 1.0)) throw Error(ErrorCode::InvalidSpec, "split fractions must lie in [0, 1]");
        if (std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-9)
            throw Error(ErrorCode::InvalidSpec, "split fractions must sum to 1");
    }
};

struct Split {
    Dataset train;
    Dataset val;
    Dataset test;
    std::uint64_t seed = 0;
};

/// Per-class partition sizes: floor for test and validation, remainder to
/// training. The 1e-9 slack absorbs representation error such as 0.1 * 30.
struct PartitionSizes {
    std::size_t train = 0, val = 0, test = 0;
};

inline PartitionSizes split_sizes(std::size_t n, const SplitSpec& spec) {
    const auto nd = static_cast<double>(n);
    PartitionSizes p;
    p.test = static_cast<std::size_t>(std::floor(spec.test_frac * nd + 1e-9));
    p.val = static_cast<std::size_t>(std::floor(spec.val_frac * nd + 1e-9));
    p.test = std::min(p.test, n);
    p.val = std::min(p.val, n - p.test);
    p.train = n - p.test - p.val;
    return p;
}

/// Each class is shuffled independently and cut by split_sizes(); the
/// partitions keep the input's sample order.
inline Split stratified_split(const Dataset& data, const SplitSpec& spec) {
    spec.validate();
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < data.size(); ++i) by_class[data[i].label].push_back(i);
    for (int c = 0; c < 2; ++c) {
        if (by_class[c].empty())
            throw Error(ErrorCode::MissingClass, "class " + std::to_string(c) + " has no samples");
        if (by_class[c].size() < 3)
            throw Error(ErrorCode::ClassTooSmall, "class " + std::to_string(c) + " has " +
                                                      std::to_string(by_class[c].size()) + " samples, need 3");
    }

    Rng rng(spec.seed);
    std::vector<Role> role(data.size(), Role::Train);
    for (auto& members : by_class) {
        shuffle(members, rng);
        const auto sz = split_sizes(members.size(), spec);
        for (std::size_t k = 0; k < sz.test; ++k) role[members[k]] = Role::Test;
        for (std::size_t k = sz.test; k < sz.test + sz.val; ++k) role[members[k]] = Role::Validation;
    }
    std::vector<std::size_t> tr, va, te;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (role[i] == Role::Train) tr.push_back(i);
        else if (role[i] == Role::Validation) va.push_back(i);
        else te.push_back(i);
    }
    return Split{data.subset(tr, Role::Train), data.subset(va, Role::Validation),
                 data.subset(te, Role::Test), spec.seed};
}

}  // namespace cgpclf
