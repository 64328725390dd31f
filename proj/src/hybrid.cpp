#include "rankfuse/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <vector>
#include <limits>
#include <string_view>
#include <unordered_map>

#include "rankfuse/errors.hpp"

namespace rankfuse {

double reciprocal_rank_fitness(std::size_t rank) {
    return 1.0 / static_cast<double>(rank);
}

FitnessPool assign_fitness(const RecommendationSet& rs) {
    return assign_fitness(rs, reciprocal_rank_fitness);
}

FitnessPool assign_fitness(const RecommendationSet& rs, const FitnessFn& fitness) {
    require_valid(rs);

    FitnessPool pool;
    // Views into the source lists; they stay alive for the whole build.
    std::unordered_map<std::string_view, std::size_t> item_index;
    std::size_t total_items = 0;
    for (const RankedList& list : rs.lists) total_items += list.items.size();
    pool.entries.reserve(total_items);
    pool.distinct_items.reserve(total_items);
    item_index.reserve(total_items);

    for (std::size_t s = 0; s < rs.lists.size(); ++s) {
        const RankedList& list = rs.lists[s];
        for (std::size_t p = 0; p < list.items.size(); ++p) {
            const ItemId& item = list.items[p];
            auto [it, inserted] =
                item_index.try_emplace(std::string_view(item), pool.distinct_items.size());
            if (inserted) pool.distinct_items.push_back(item);
            const std::size_t rank = p + 1;
            const double f = fitness(rank);
            pool.entries.push_back({item, f, s, rank, it->second});
            pool.total_fitness += f;
        }
    }
    return pool;
}

AliasTable::AliasTable(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw EmptyPoolError("alias table over an empty weight sequence");
    double total = 0.0;
    for (double w : weights) total += w;

    prob_.resize(n);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i] = weights[i] * static_cast<double>(n) / total;
    }

    std::vector<std::size_t> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
        const std::size_t s = small.back();
        const std::size_t l = large.back();
        small.pop_back();
        large.pop_back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    // Leftovers are 1.0 up to rounding.
    for (std::size_t i : small) { prob_[i] = 1.0; alias_[i] = i; }
    for (std::size_t i : large) { prob_[i] = 1.0; alias_[i] = i; }
}

std::size_t AliasTable::sample(Rng& rng) const {
    const std::size_t n = prob_.size();
    std::size_t idx = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
    if (idx >= n) idx = n - 1;
    return rng.uniform() < prob_[idx] ? idx : alias_[idx];
}

Population select_population(const FitnessPool& pool, std::size_t n, std::uint64_t seed) {
    if (pool.entries.empty()) throw EmptyPoolError("cannot sample from an empty pool");
    if (n == 0) throw ZeroPopulationError("population size must be at least 1");

    std::vector<double> weights;
    weights.reserve(pool.entries.size());
    for (const PoolEntry& e : pool.entries) weights.push_back(e.fitness);
    const AliasTable table(weights);

    Population pop;
    pop.entry_counts.assign(pool.entries.size(), 0);
    pop.size = n;
    Rng rng(seed);
    for (std::size_t d = 0; d < n; ++d) {
        ++pop.entry_counts[table.sample(rng)];
    }
    return pop;
}

std::map<ItemId, std::uint64_t> Population::item_counts(const FitnessPool& pool) const {
    std::map<ItemId, std::uint64_t> counts;
    for (std::size_t i = 0; i < entry_counts.size(); ++i) {
        if (entry_counts[i] > 0) counts[pool.entries[i].item] += entry_counts[i];
    }
    return counts;
}

namespace {

// Per-item aggregate used for ordering: merged draw count, summed
// fitness, and the (source, rank) of the first appearance.
struct ItemAgg {
    std::uint64_t count = 0;
    double total_fitness = 0.0;
    std::size_t source_index = std::numeric_limits<std::size_t>::max();
    std::size_t rank = std::numeric_limits<std::size_t>::max();

    void absorb(const PoolEntry& e) {
        total_fitness += e.fitness;
        if (e.source_index < source_index) {
            source_index = e.source_index;
            rank = e.rank;
        }
    }
};

}  // namespace

Ensemble rank_by_frequency(const Population& pop, const FitnessPool& pool) {
    std::vector<ItemAgg> agg(pool.distinct_items.size());
    for (std::size_t i = 0; i < pool.entries.size(); ++i) {
        const PoolEntry& e = pool.entries[i];
        ItemAgg& a = agg[e.item_index];
        a.count += pop.entry_counts[i];
        a.absorb(e);
    }

    std::vector<std::size_t> drawn;
    drawn.reserve(agg.size());
    for (std::size_t i = 0; i < agg.size(); ++i) {
        if (agg[i].count > 0) drawn.push_back(i);
    }
    std::sort(drawn.begin(), drawn.end(), [&agg](std::size_t a, std::size_t b) {
        if (agg[a].count != agg[b].count) return agg[a].count > agg[b].count;
        if (agg[a].total_fitness != agg[b].total_fitness)
            return agg[a].total_fitness > agg[b].total_fitness;
        if (agg[a].source_index != agg[b].source_index)
            return agg[a].source_index < agg[b].source_index;
        return agg[a].rank < agg[b].rank;
    });

    Ensemble ensemble;
    ensemble.method = Method::SemiGenetic;
    ensemble.population_size = pop.size;
    ensemble.entries.reserve(drawn.size());
    for (std::size_t i : drawn) {
        ensemble.entries.push_back({pool.distinct_items[i], static_cast<double>(agg[i].count)});
    }
    return ensemble;
}

Ensemble semi_genetic_hybrid(const RecommendationSet& rs, std::size_t n,
                             std::uint64_t seed, bool pad_undrawn) {
    const FitnessPool pool = assign_fitness(rs);
    const Population pop = select_population(pool, n, seed);
    Ensemble ensemble = rank_by_frequency(pop, pool);
    ensemble.user = rs.user;
    ensemble.seed = seed;

    if (pad_undrawn && ensemble.entries.size() < pool.distinct_items.size()) {
        std::vector<ItemAgg> agg(pool.distinct_items.size());
        for (std::size_t i = 0; i < pool.entries.size(); ++i) {
            const PoolEntry& e = pool.entries[i];
            agg[e.item_index].count += pop.entry_counts[i];
            agg[e.item_index].absorb(e);
        }
        std::vector<std::size_t> undrawn;
        for (std::size_t i = 0; i < agg.size(); ++i) {
            if (agg[i].count == 0) undrawn.push_back(i);
        }
        std::sort(undrawn.begin(), undrawn.end(), [&agg](std::size_t a, std::size_t b) {
            if (agg[a].total_fitness != agg[b].total_fitness)
                return agg[a].total_fitness > agg[b].total_fitness;
            if (agg[a].source_index != agg[b].source_index)
                return agg[a].source_index < agg[b].source_index;
            return agg[a].rank < agg[b].rank;
        });
        for (std::size_t i : undrawn) {
            ensemble.entries.push_back({pool.distinct_items[i], 0.0});
        }
    }
    return ensemble;
}

Ensemble weighted_vote_hybrid(const RecommendationSet& rs) {
    require_valid(rs);

    struct Vote {
        std::uint32_t votes = 0;
        std::size_t source_index = std::numeric_limits<std::size_t>::max();
        std::size_t rank = std::numeric_limits<std::size_t>::max();
    };

    std::vector<ItemId> order;  // first-appearance order
    std::unordered_map<ItemId, std::size_t> index;
    std::vector<Vote> votes;
    for (std::size_t s = 0; s < rs.lists.size(); ++s) {
        const RankedList& list = rs.lists[s];
        for (std::size_t p = 0; p < list.items.size(); ++p) {
            auto [it, inserted] = index.try_emplace(list.items[p], order.size());
            if (inserted) {
                order.push_back(list.items[p]);
                votes.emplace_back();
            }
            Vote& v = votes[it->second];
            ++v.votes;
            if (s < v.source_index) {
                v.source_index = s;
                v.rank = p + 1;
            }
        }
    }

    std::vector<std::size_t> idx(order.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&votes](std::size_t a, std::size_t b) {
        if (votes[a].votes != votes[b].votes) return votes[a].votes > votes[b].votes;
        if (votes[a].source_index != votes[b].source_index)
            return votes[a].source_index < votes[b].source_index;
        return votes[a].rank < votes[b].rank;
    });

    Ensemble ensemble;
    ensemble.user = rs.user;
    ensemble.method = Method::WeightedVote;
    ensemble.entries.reserve(idx.size());
    for (std::size_t i : idx) {
        ensemble.entries.push_back({order[i], static_cast<double>(votes[i].votes)});
    }
    return ensemble;
}

}  // namespace rankfuse
