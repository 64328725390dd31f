#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <ostream>
#include <vector>

#include "rankfuse/core.hpp"
#include "rankfuse/eval.hpp"

namespace rankfuse {

using Duration = std::chrono::nanoseconds;

/// Aggregated grid-search outcome for one population size.
struct GridResult {
    std::size_t n = 0;
    std::vector<double> map_scores;   // one per repeat
    std::vector<Duration> runtimes;   // one per repeat, hybridization only
    double median_map = 0.0;
    double ci95_low = 0.0;            // 2.5th percentile of map_scores
    double ci95_high = 0.0;           // 97.5th percentile
    Duration median_runtime{0};
};

/// The default grid from the reference experiments: 1000..40000 step 1000.
std::vector<std::size_t> default_grid();

/// Runs the semi-genetic hybrid for every user at every grid value,
/// `repeats` times each, and records MAP@k plus the wall-clock time of
/// the hybridization pass (excluding evaluation and data preparation).
///
/// The seed of repeat r at grid value n for user u is
/// derive_seed(base_seed, n, r, u); the MAP sequences are therefore
/// reproducible for a fixed base_seed. With jobs > 1, grid points run
/// concurrently; timings then overlap and the caller accepts the noise.
std::vector<GridResult> grid_search(const std::map<UserId, RecommendationSet>& rs_per_user,
                                    const std::map<UserId, HoldoutPair>& holdouts,
                                    const std::vector<std::size_t>& grid,
                                    std::size_t repeats, std::size_t k,
                                    std::uint64_t base_seed, unsigned jobs = 1);

/// Runtime-constrained selection: among grid results whose median
/// runtime does not exceed the fastest baseline run, the n with the
/// highest median MAP (ties to the smaller n). Throws NoFeasibleNError
/// when nothing meets the budget.
std::size_t select_n(const std::vector<GridResult>& results,
                     const std::vector<Duration>& baseline_runtimes);

// CSV output. Raw: n, repeat, map, runtime_ns.
// Summary: n, median_map, ci_low, ci_high, median_runtime_ns.
void write_grid_csv(const std::vector<GridResult>& results, std::ostream& out);
void write_grid_summary_csv(const std::vector<GridResult>& results, std::ostream& out);

}  // namespace rankfuse
