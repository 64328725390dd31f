#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "rankfuse/core.hpp"
#include "rankfuse/rng.hpp"

namespace rankfuse {

/// One chromosome: an item occurrence in one source list together with
/// its fitness. The same item appears once per source list containing
/// it, which raises its chance to be drawn.
struct PoolEntry {
    ItemId item;
    double fitness;          // 1/rank by default
    std::size_t source_index;
    std::size_t rank;        // 1-based rank within the source list
    std::size_t item_index;  // index into FitnessPool::distinct_items
};

/// The chromosome pool: all (list, item) pairs with their fitness.
struct FitnessPool {
    std::vector<PoolEntry> entries;
    std::vector<ItemId> distinct_items;  // first-appearance order
    double total_fitness = 0.0;
};

/// Result of fitness-proportional drawing with replacement: per-entry
/// draw counts summing to the requested population size.
struct Population {
    std::vector<std::uint64_t> entry_counts;  // parallel to pool.entries
    std::uint64_t size = 0;

    /// Draw counts merged per item, keyed by ItemId.
    std::map<ItemId, std::uint64_t> item_counts(const FitnessPool& pool) const;
};

/// Maps the 1-based rank of an item in a source list to its fitness.
using FitnessFn = std::function<double(std::size_t rank)>;

/// The default fitness: the reciprocal of the rank.
double reciprocal_rank_fitness(std::size_t rank);

/// Builds the chromosome pool from a recommendation set, one entry per
/// (list, item) pair with fitness 1/rank. An alternate fitness function
/// may be injected; reciprocal rank is the default and the tested path.
FitnessPool assign_fitness(const RecommendationSet& rs);
FitnessPool assign_fitness(const RecommendationSet& rs, const FitnessFn& fitness);

/// Walker alias table for O(1) fitness-proportional draws. Construction
/// is deterministic for a given weight sequence.
class AliasTable {
public:
    explicit AliasTable(const std::vector<double>& weights);

    /// One draw; consumes exactly two uniform values from the generator.
    std::size_t sample(Rng& rng) const;

    std::size_t size() const { return prob_.size(); }

private:
    std::vector<double> prob_;
    std::vector<std::size_t> alias_;
};

/// Draws n entries with replacement, each draw hitting entry e with
/// probability e.fitness / pool.total_fitness. Identical (pool, n, seed)
/// triples yield identical populations.
Population select_population(const FitnessPool& pool, std::size_t n, std::uint64_t seed);

/// Orders the drawn items by decreasing draw count. Ties break by total
/// fitness across pool entries (desc), then lowest source index, then
/// earliest rank in that source. Items never drawn are absent.
Ensemble rank_by_frequency(const Population& pop, const FitnessPool& pool);

/// Single-pass semi-genetic hybridization: fitness assignment,
/// fitness-proportional selection of n draws, frequency ranking. No
/// cross-over, no mutation, no second iteration.
///
/// With pad_undrawn set, pool items that were never drawn are appended
/// after the drawn items, ordered by total fitness (desc); their score
/// is 0. Off by default: the solution set only contains drawn items.
Ensemble semi_genetic_hybrid(const RecommendationSet& rs, std::size_t n,
                             std::uint64_t seed, bool pad_undrawn = false);

/// Weighted voting baseline: each source list casts one vote per item
/// it contains; items ordered by vote count (desc), ties by the lowest
/// source index of first appearance, then rank within that source.
/// Deterministic, no randomness.
Ensemble weighted_vote_hybrid(const RecommendationSet& rs);

}  // namespace rankfuse
