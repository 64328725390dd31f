#include "rankfuse/bench.hpp"

#include <algorithm>
#include <cstdio>

#include "rankfuse/errors.hpp"
#include "rankfuse/hybrid.hpp"
#include "rankfuse/rng.hpp"
#include "rankfuse/stats.hpp"

namespace rankfuse {

namespace {

Ensemble run_config(const RecommendationSet& rs, const BenchConfig& config,
                    std::uint64_t seed) {
    if (config.method == Method::SemiGenetic) {
        return semi_genetic_hybrid(rs, config.population_size, seed);
    }
    return weighted_vote_hybrid(rs);
}

}  // namespace

std::vector<BenchRow> bench_methods(const std::map<UserId, RecommendationSet>& rs_per_user,
                                    const std::vector<BenchConfig>& configs,
                                    std::size_t repeats, bool warmup,
                                    const BenchHooks* hooks) {
    if (repeats == 0) throw Error("repeats must be at least 1");

    const auto hybridize = [&](const RecommendationSet& rs, const BenchConfig& config,
                               std::uint64_t seed) {
        if (hooks && hooks->hybridize) return hooks->hybridize(rs, config, seed);
        return run_config(rs, config, seed);
    };

    std::vector<BenchRow> rows;
    rows.reserve(configs.size() * repeats);
    for (const BenchConfig& config : configs) {
        // One untimed pass to absorb one-time allocation effects.
        const std::size_t first = warmup ? 0 : 1;
        for (std::size_t r = first; r <= repeats; ++r) {
            const bool timed = r >= 1;
            if (timed && hooks && hooks->on_timer_start) hooks->on_timer_start();
            const auto start = std::chrono::steady_clock::now();
            for (const auto& [user, rs] : rs_per_user) {
                const std::uint64_t seed = derive_seed(config.seed, r, user);
                (void)hybridize(rs, config, seed);
            }
            const auto stop = std::chrono::steady_clock::now();
            if (timed && hooks && hooks->on_timer_stop) hooks->on_timer_stop();
            if (timed) {
                rows.push_back({config.label, r - 1,
                                std::chrono::duration_cast<Duration>(stop - start)});
            }
        }
    }
    return rows;
}

std::vector<NormalizedRow> normalize_to_baseline(const std::vector<BenchRow>& rows,
                                                 const std::string& baseline_method) {
    std::vector<std::int64_t> baseline;
    for (const BenchRow& row : rows) {
        if (row.method == baseline_method) baseline.push_back(row.runtime.count());
    }
    if (baseline.empty()) {
        throw MissingBaselineError("no rows for baseline method '" + baseline_method + "'");
    }
    const double base_median = median(baseline);

    std::vector<NormalizedRow> normalized;
    normalized.reserve(rows.size());
    for (const BenchRow& row : rows) {
        normalized.push_back(
            {row.method, row.repeat, static_cast<double>(row.runtime.count()) / base_median});
    }
    return normalized;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
    out << "method,repeat,runtime_ns\n";
    for (const BenchRow& row : rows) {
        out << row.method << ',' << row.repeat << ',' << row.runtime.count() << '\n';
    }
}

void write_normalized_csv(const std::vector<NormalizedRow>& rows, std::ostream& out) {
    out << "method,repeat,relative_runtime\n";
    char buf[64];
    for (const NormalizedRow& row : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g", row.relative_runtime);
        out << row.method << ',' << row.repeat << ',' << buf << '\n';
    }
}

}  // namespace rankfuse
