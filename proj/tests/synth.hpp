#pragma once

// Deterministic synthetic interaction data at the scale of the
// MovieLens 100K benchmark: 943 users, 1664 items, a long-tailed item
// popularity and clustered user tastes so that both popularity- and
// similarity-based recommenders have signal to find.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rankfuse/core.hpp"
#include "rankfuse/rng.hpp"

namespace rankfuse::testutil {

struct SynthConfig {
    std::size_t users = 943;
    std::size_t items = 1664;
    std::size_t genres = 12;
    std::size_t min_events = 20;
    double mean_extra_events = 85.0;  // on top of min_events
    double popularity_exponent = 0.9;
    double favored_affinity = 8.0;
    double rating_noise = 1.0;
};

inline InteractionLog synthetic_movielens(std::uint64_t seed,
                                          const SynthConfig& config = {}) {
    Rng rng(seed);

    std::vector<std::size_t> item_genre(config.items);
    std::vector<double> item_weight(config.items);
    for (std::size_t i = 0; i < config.items; ++i) {
        item_genre[i] = static_cast<std::size_t>(rng.uniform() * config.genres);
        item_weight[i] = 1.0 / std::pow(static_cast<double>(i + 5),
                                        config.popularity_exponent);
    }

    InteractionLog log;
    for (std::size_t u = 0; u < config.users; ++u) {
        // Three favored genres with decreasing affinity.
        std::size_t favored[3];
        favored[0] = static_cast<std::size_t>(rng.uniform() * config.genres);
        do {
            favored[1] = static_cast<std::size_t>(rng.uniform() * config.genres);
        } while (favored[1] == favored[0]);
        do {
            favored[2] = static_cast<std::size_t>(rng.uniform() * config.genres);
        } while (favored[2] == favored[0] || favored[2] == favored[1]);

        auto affinity = [&](std::size_t genre) {
            if (genre == favored[0]) return config.favored_affinity;
            if (genre == favored[1]) return config.favored_affinity / 2.0;
            if (genre == favored[2]) return config.favored_affinity / 4.0;
            return 1.0;
        };

        std::size_t count = config.min_events +
                            static_cast<std::size_t>(-config.mean_extra_events *
                                                     std::log(1.0 - rng.uniform()));
        count = std::min(count, config.items / 3);

        // Weighted sampling without replacement (Efraimidis-Spirakis):
        // the `count` largest keys u^(1/w) are the chosen items.
        std::vector<std::pair<double, std::size_t>> keys;
        keys.reserve(config.items);
        for (std::size_t i = 0; i < config.items; ++i) {
            const double w = item_weight[i] * affinity(item_genre[i]);
            keys.emplace_back(std::pow(rng.uniform(), 1.0 / w), i);
        }
        std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(count),
                          keys.end(), [](const auto& a, const auto& b) {
                              return a.first > b.first;
                          });

        for (std::size_t e = 0; e < count; ++e) {
            const std::size_t item = keys[e].second;
            double bonus = 0.0;
            if (item_genre[item] == favored[0]) bonus = 1.5;
            else if (item_genre[item] == favored[1]) bonus = 1.0;
            else if (item_genre[item] == favored[2]) bonus = 0.5;
            double rating = 3.0 + bonus +
                            (rng.uniform() * 2.0 - 1.0) * config.rating_noise;
            rating = std::clamp(std::round(rating), 1.0, 5.0);

            Event ev;
            ev.user = "u" + std::to_string(u + 1);
            ev.item = "m" + std::to_string(item + 1);
            ev.rating = rating;
            ev.timestamp = static_cast<std::int64_t>(880000000 + e);
            log.events.push_back(std::move(ev));
        }
    }
    return log;
}

}  // namespace rankfuse::testutil
