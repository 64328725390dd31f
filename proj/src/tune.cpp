#include "rankfuse/tune.hpp"

#include <algorithm>
#include <cstdio>
#include <future>

#include "rankfuse/errors.hpp"
#include "rankfuse/hybrid.hpp"
#include "rankfuse/rng.hpp"
#include "rankfuse/stats.hpp"

namespace rankfuse {

std::vector<std::size_t> default_grid() {
    std::vector<std::size_t> grid;
    for (std::size_t n = 1000; n <= 40000; n += 1000) grid.push_back(n);
    return grid;
}

namespace {

GridResult run_grid_point(const std::map<UserId, RecommendationSet>& rs_per_user,
                          const std::map<UserId, HoldoutPair>& holdouts,
                          std::size_t n, std::size_t repeats, std::size_t k,
                          std::uint64_t base_seed) {
    GridResult result;
    result.n = n;
    result.map_scores.reserve(repeats);
    result.runtimes.reserve(repeats);

    for (std::size_t r = 0; r < repeats; ++r) {
        std::map<UserId, Ensemble> ensembles;

        // Timed region: hybridization only. Evaluation and data
        // preparation stay outside.
        const auto start = std::chrono::steady_clock::now();
        for (const auto& [user, rs] : rs_per_user) {
            ensembles.emplace(user, semi_genetic_hybrid(rs, n, derive_seed(base_seed, n, r, user)));
        }
        const auto stop = std::chrono::steady_clock::now();

        result.runtimes.push_back(std::chrono::duration_cast<Duration>(stop - start));
        result.map_scores.push_back(map_at_k(ensembles, holdouts, k).map_score);
    }

    result.median_map = median(result.map_scores);
    result.ci95_low = percentile(result.map_scores, 0.025);
    result.ci95_high = percentile(result.map_scores, 0.975);
    std::vector<std::int64_t> ns;
    ns.reserve(result.runtimes.size());
    for (Duration d : result.runtimes) ns.push_back(d.count());
    result.median_runtime = Duration(static_cast<std::int64_t>(median(ns)));
    return result;
}

}  // namespace

std::vector<GridResult> grid_search(const std::map<UserId, RecommendationSet>& rs_per_user,
                                    const std::map<UserId, HoldoutPair>& holdouts,
                                    const std::vector<std::size_t>& grid,
                                    std::size_t repeats, std::size_t k,
                                    std::uint64_t base_seed, unsigned jobs) {
    if (grid.empty()) throw Error("grid must be non-empty");
    if (repeats == 0) throw Error("repeats must be at least 1");

    std::vector<std::size_t> ordered = grid;
    std::sort(ordered.begin(), ordered.end());

    std::vector<GridResult> results(ordered.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < ordered.size(); ++i) {
            results[i] =
                run_grid_point(rs_per_user, holdouts, ordered[i], repeats, k, base_seed);
        }
        return results;
    }

    // Opt-in concurrency: grid points in flight up to `jobs` at a time.
    std::size_t next = 0;
    while (next < ordered.size()) {
        const std::size_t batch = std::min<std::size_t>(jobs, ordered.size() - next);
        std::vector<std::future<GridResult>> futures;
        futures.reserve(batch);
        for (std::size_t b = 0; b < batch; ++b) {
            const std::size_t n = ordered[next + b];
            futures.push_back(std::async(std::launch::async, [&, n] {
                return run_grid_point(rs_per_user, holdouts, n, repeats, k, base_seed);
            }));
        }
        for (std::size_t b = 0; b < batch; ++b) {
            results[next + b] = futures[b].get();
        }
        next += batch;
    }
    return results;
}

std::size_t select_n(const std::vector<GridResult>& results,
                     const std::vector<Duration>& baseline_runtimes) {
    if (results.empty()) throw Error("no grid results");
    if (baseline_runtimes.empty()) throw Error("no baseline runtimes");

    const Duration budget = *std::min_element(baseline_runtimes.begin(), baseline_runtimes.end());

    bool found = false;
    std::size_t best_n = 0;
    double best_map = 0.0;
    for (const GridResult& r : results) {
        if (r.median_runtime > budget) continue;
        if (!found || r.median_map > best_map ||
            (r.median_map == best_map && r.n < best_n)) {
            found = true;
            best_n = r.n;
            best_map = r.median_map;
        }
    }
    if (!found) {
        throw NoFeasibleNError("no grid configuration runs within the baseline budget of " +
                               std::to_string(budget.count()) + " ns");
    }
    return best_n;
}

void write_grid_csv(const std::vector<GridResult>& results, std::ostream& out) {
    out << "n,repeat,map,runtime_ns\n";
    char buf[64];
    for (const GridResult& r : results) {
        for (std::size_t i = 0; i < r.map_scores.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", r.map_scores[i]);
            out << r.n << ',' << i << ',' << buf << ',' << r.runtimes[i].count() << '\n';
        }
    }
}

void write_grid_summary_csv(const std::vector<GridResult>& results, std::ostream& out) {
    out << "n,median_map,ci_low,ci_high,median_runtime_ns\n";
    char m[64], lo[64], hi[64];
    for (const GridResult& r : results) {
        std::snprintf(m, sizeof(m), "%.17g", r.median_map);
        std::snprintf(lo, sizeof(lo), "%.17g", r.ci95_low);
        std::snprintf(hi, sizeof(hi), "%.17g", r.ci95_high);
        out << r.n << ',' << m << ',' << lo << ',' << hi << ',' << r.median_runtime.count()
            << '\n';
    }
}

}  // namespace rankfuse
