#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "rankfuse/bench.hpp"
#include "rankfuse/hybrid.hpp"
#include "test_util.hpp"

using namespace rankfuse;
using namespace rankfuse::testutil;

namespace {

std::map<UserId, RecommendationSet> small_instance() {
    std::map<UserId, RecommendationSet> sets;
    for (int u = 0; u < 3; ++u) {
        std::vector<ItemId> a, b;
        for (int i = 0; i < 25; ++i) {
            a.push_back("i" + std::to_string(i));
            b.push_back("i" + std::to_string(i + 10));
        }
        sets.emplace("u" + std::to_string(u),
                     make_rs({a, b}, "u" + std::to_string(u)));
    }
    return sets;
}

}  // namespace

TEST_CASE("bench rows: configs times repeats") {
    const std::vector<BenchConfig> configs = {
        {"weighted", Method::WeightedVote, 0, 1},
        {"semi", Method::SemiGenetic, 500, 1},
    };
    const auto rows = bench_methods(small_instance(), configs, 3);
    REQUIRE(rows.size() == 6);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(rows[i].method == "weighted");
        CHECK(rows[i].repeat == i);
        CHECK(rows[i].runtime.count() > 0);
    }
    for (std::size_t i = 3; i < 6; ++i) CHECK(rows[i].method == "semi");
}

TEST_CASE("normalization arithmetic") {
    const std::vector<BenchRow> rows = {
        {"base", 0, Duration(10)},
        {"base", 1, Duration(20)},
        {"base", 2, Duration(30)},
        {"other", 0, Duration(15)},
    };
    const auto normalized = normalize_to_baseline(rows, "base");
    REQUIRE(normalized.size() == 4);
    CHECK(normalized[1].relative_runtime == 1.0);  // 20 / median 20
    CHECK(normalized[3].relative_runtime == 0.75);
}

TEST_CASE("baseline-only table has median exactly 1") {
    // Odd repeat count: the median is one of the values, so the
    // self-normalized median is exactly 1.0.
    const std::vector<BenchRow> rows = {
        {"base", 0, Duration(17)},
        {"base", 1, Duration(23)},
        {"base", 2, Duration(19)},
    };
    const auto normalized = normalize_to_baseline(rows, "base");
    std::vector<double> values;
    for (const NormalizedRow& row : normalized) values.push_back(row.relative_runtime);
    std::sort(values.begin(), values.end());
    CHECK(values[1] == 1.0);
}

TEST_CASE("missing baseline is an error") {
    const std::vector<BenchRow> rows = {{"semi", 0, Duration(10)}};
    CHECK_THROWS_AS(normalize_to_baseline(rows, "weighted"), MissingBaselineError);
}

TEST_CASE("only hybridization runs inside the timed region") {
    enum class Phase { Outside, Inside };
    Phase phase = Phase::Outside;
    std::size_t calls_inside = 0;
    bool violation = false;

    BenchHooks hooks;
    hooks.on_timer_start = [&] { phase = Phase::Inside; };
    hooks.on_timer_stop = [&] { phase = Phase::Outside; };
    hooks.hybridize = [&](const RecommendationSet& rs, const BenchConfig& config,
                          std::uint64_t seed) {
        if (phase == Phase::Inside) {
            ++calls_inside;
        } else {
            // Warm-up passes run outside the timers; anything else
            // outside is a violation.
            violation = violation || config.label != "warm-expected";
        }
        if (config.method == Method::SemiGenetic) {
            return semi_genetic_hybrid(rs, config.population_size, seed);
        }
        return weighted_vote_hybrid(rs);
    };

    const auto sets = small_instance();
    const std::vector<BenchConfig> configs = {{"semi", Method::SemiGenetic, 100, 1}};

    // Without warm-up every call must be inside the timed region.
    const auto rows = bench_methods(sets, configs, 2, /*warmup=*/false, &hooks);
    CHECK(rows.size() == 2);
    CHECK(calls_inside == 2 * sets.size());
    CHECK(!violation);

    // With warm-up, exactly one extra untimed pass happens.
    calls_inside = 0;
    std::size_t outside = 0;
    hooks.hybridize = [&](const RecommendationSet& rs, const BenchConfig& config,
                          std::uint64_t seed) {
        (void)config;
        (phase == Phase::Inside ? calls_inside : outside) += 1;
        return semi_genetic_hybrid(rs, 100, seed);
    };
    bench_methods(sets, configs, 2, /*warmup=*/true, &hooks);
    CHECK(calls_inside == 2 * sets.size());
    CHECK(outside == sets.size());
}

TEST_CASE("warm-up repeats use distinct seeds from the timed repeats") {
    std::vector<std::uint64_t> seeds;
    BenchHooks hooks;
    hooks.hybridize = [&](const RecommendationSet& rs, const BenchConfig&, std::uint64_t seed) {
        seeds.push_back(seed);
        return weighted_vote_hybrid(rs);
    };
    const auto sets = small_instance();
    bench_methods(sets, {{"w", Method::WeightedVote, 0, 5}}, 1, true, &hooks);
    REQUIRE(seeds.size() == 2 * sets.size());
    CHECK(seeds[0] != seeds[sets.size()]);
}

TEST_CASE("bench csv outputs") {
    const std::vector<BenchRow> rows = {{"w", 0, Duration(5)}};
    std::ostringstream raw;
    write_bench_csv(rows, raw);
    CHECK(raw.str() == "method,repeat,runtime_ns\nw,0,5\n");

    const std::vector<NormalizedRow> normalized = {{"w", 0, 1.0}};
    std::ostringstream n;
    write_normalized_csv(normalized, n);
    CHECK(n.str() == "method,repeat,relative_runtime\nw,0,1\n");
}
