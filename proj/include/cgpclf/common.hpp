// Shared error type, seeded random helpers and summary statistics.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace cgpclf {

enum class ErrorCode {
    MissingColumn,
    NonBinaryLabel,
    NonFiniteFeature,
    LayoutMismatch,
    EmptyDataset,
    DuplicateId,
    RegionCountMismatch,
    TimepointMismatch,
    ClassTooSmall,
    MissingClass,
    InvalidSpec,
    InvalidProbability,
    InvalidGenome,
    InputLengthMismatch,
    NonFiniteInput,
    EmptySeries,
    NotRecurrent,
    MinorityTooSmall,
    SingleClass,
    PoolTooSmall,
    LeakageGuard,
    ClassSmallerThanK,
    InvalidConfig,
    MalformedGenomeFile,
    Io,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::NonBinaryLabel: return "NonBinaryLabel";
        case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
        case ErrorCode::LayoutMismatch: return "LayoutMismatch";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::RegionCountMismatch: return "RegionCountMismatch";
        case ErrorCode::TimepointMismatch: return "TimepointMismatch";
        case ErrorCode::ClassTooSmall: return "ClassTooSmall";
        case ErrorCode::MissingClass: return "MissingClass";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::InvalidProbability: return "InvalidProbability";
        case ErrorCode::InvalidGenome: return "InvalidGenome";
        case ErrorCode::InputLengthMismatch: return "InputLengthMismatch";
        case ErrorCode::NonFiniteInput: return "NonFiniteInput";
        case ErrorCode::EmptySeries: return "EmptySeries";
        case ErrorCode::NotRecurrent: return "NotRecurrent";
        case ErrorCode::MinorityTooSmall: return "MinorityTooSmall";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::PoolTooSmall: return "PoolTooSmall";
        case ErrorCode::LeakageGuard: return "LeakageGuard";
        case ErrorCode::ClassSmallerThanK: return "ClassSmallerThanK";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::MalformedGenomeFile: return "MalformedGenomeFile";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept {
    return derive_seed(derive_seed(master, a), b);
}

// The std distributions are implementation-defined, so the few draws the
// library needs are spelled out here to keep results identical everywhere.

/// Uniform integer in [0, n). Requires n > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % n;
}

/// Uniform real in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01(rng) < p;
}

/// Standard normal via Box-Muller (one value per call).
inline double standard_normal(Rng& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

/// Mean and sample standard deviation (n - 1 denominator).
struct Summary {
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t n = 0;
    bool sd_defined = false;  // false when n < 2; sd is then reported as 0
};

inline Summary summarize(std::span<const double> values) {
    Summary s;
    s.n = values.size();
    if (values.empty()) return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
    s.min = s.max = values.front();
    for (double v : values) {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    // Guard against rounding pushing the mean outside [min, max].
    s.mean = std::clamp(s.mean, s.min, s.max);
    if (s.n >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
        s.sd_defined = true;
    }
    return s;
}

inline void require_probability(double p, std::string_view name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw Error(ErrorCode::InvalidProbability, std::string(name) + " must lie in [0, 1]");
}

inline std::size_t default_jobs() {
    const auto n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

/// Calls fn(i) for i in [0, n) on up to `jobs` threads. Callers write
/// results into per-index slots, so completion order never shows up in the
/// output. The first exception thrown by any task is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(jobs, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace cgpclf
