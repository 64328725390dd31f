#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "rankfuse/core.hpp"
#include "rankfuse/tune.hpp"

namespace rankfuse {

/// One benchmarked configuration. `population_size` and `seed` apply to
/// the semi-genetic method only.
struct BenchConfig {
    std::string label;
    Method method = Method::WeightedVote;
    std::size_t population_size = 0;
    std::uint64_t seed = 0;
};

struct BenchRow {
    std::string method;
    std::size_t repeat = 0;
    Duration runtime{0};
};

struct NormalizedRow {
    std::string method;
    std::size_t repeat = 0;
    double relative_runtime = 0.0;
};

/// Instrumentation hooks around the timed region; used by tests to
/// assert that only the hybridization calls sit between timer start and
/// stop.
struct BenchHooks {
    std::function<void()> on_timer_start;
    std::function<void()> on_timer_stop;
    /// Replaces the hybridization call when set. Receives the per-user
    /// recommendation set, the config, and the per-user derived seed.
    std::function<Ensemble(const RecommendationSet&, const BenchConfig&, std::uint64_t)> hybridize;
};

/// Times hybridizing all users once per repeat, per config. Monotonic
/// wall clock; the timed region contains only the hybridization calls.
/// One untimed warm-up pass per config runs first unless disabled.
std::vector<BenchRow> bench_methods(const std::map<UserId, RecommendationSet>& rs_per_user,
                                    const std::vector<BenchConfig>& configs,
                                    std::size_t repeats, bool warmup = true,
                                    const BenchHooks* hooks = nullptr);

/// Divides every runtime by the median runtime of the baseline method;
/// the baseline's own median maps to 1.0 exactly.
std::vector<NormalizedRow> normalize_to_baseline(const std::vector<BenchRow>& rows,
                                                 const std::string& baseline_method);

// CSV output. Raw: method, repeat, runtime_ns. Normalized: method,
// repeat, relative_runtime.
void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out);
void write_normalized_csv(const std::vector<NormalizedRow>& rows, std::ostream& out);

}  // namespace rankfuse
