#include "rankfuse/recommenders.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rankfuse/errors.hpp"

namespace rankfuse {

RatingMatrix::RatingMatrix(const InteractionLog& train) {
    // Later events overwrite earlier (user, item) cells.
    std::map<UserId, std::map<ItemId, float>> cells;
    for (const Event& ev : train.events) {
        cells[ev.user][ev.item] = static_cast<float>(ev.rating.value_or(1.0));
    }

    for (const auto& [user, row] : cells) {
        user_index_[user] = user_ids_.size();
        user_ids_.push_back(user);
        for (const auto& [item, rating] : row) {
            (void)rating;
            if (item_index_.try_emplace(item, static_cast<std::uint32_t>(item_ids_.size()))
                    .second) {
                item_ids_.push_back(item);
            }
        }
    }

    rows_.resize(user_ids_.size());
    item_popularity_.assign(item_ids_.size(), 0);
    for (const auto& [user, row] : cells) {
        auto& sparse = rows_[user_index_[user]];
        sparse.reserve(row.size());
        for (const auto& [item, rating] : row) {
            const std::uint32_t idx = item_index_[item];
            sparse.emplace_back(idx, rating);
            ++item_popularity_[idx];
        }
        std::sort(sparse.begin(), sparse.end());
    }
}

bool RatingMatrix::user_has_item(std::size_t u, std::uint32_t item) const {
    const auto& row = rows_[u];
    return std::binary_search(row.begin(), row.end(), item,
                              [](const auto& a, const auto& b) {
                                  if constexpr (std::is_same_v<std::decay_t<decltype(a)>,
                                                               std::uint32_t>) {
                                      return a < b.first;
                                  } else {
                                      return a.first < b;
                                  }
                              });
}

RankedList most_popular(const RatingMatrix& m, const UserId& user, std::size_t k) {
    const bool known = m.has_user(user);
    const std::size_t u = known ? m.user_index(user) : 0;

    std::vector<std::uint32_t> candidates;
    candidates.reserve(m.item_count());
    for (std::uint32_t i = 0; i < m.item_count(); ++i) {
        if (known && m.user_has_item(u, i)) continue;
        candidates.push_back(i);
    }
    std::sort(candidates.begin(), candidates.end(),
              [&m](std::uint32_t a, std::uint32_t b) {
                  if (m.item_popularity()[a] != m.item_popularity()[b])
                      return m.item_popularity()[a] > m.item_popularity()[b];
                  return m.items()[a] < m.items()[b];
              });
    if (candidates.size() > k) candidates.resize(k);

    RankedList list;
    list.user = user;
    list.source = "most-popular";
    list.items.reserve(candidates.size());
    for (std::uint32_t i : candidates) list.items.push_back(m.items()[i]);
    return list;
}

namespace {

struct CenteredUser {
    double mean = 0.0;
    double norm = 0.0;  // of the centered vector
};

CenteredUser center_stats(const std::vector<std::pair<std::uint32_t, float>>& row) {
    CenteredUser c;
    for (const auto& [item, rating] : row) c.mean += rating;
    c.mean /= static_cast<double>(row.size());
    for (const auto& [item, rating] : row) {
        const double d = rating - c.mean;
        c.norm += d * d;
    }
    c.norm = std::sqrt(c.norm);
    return c;
}

// Dot product of two mean-centered sparse rows over their overlap.
double centered_dot(const std::vector<std::pair<std::uint32_t, float>>& a, double mean_a,
                    const std::vector<std::pair<std::uint32_t, float>>& b, double mean_b) {
    double dot = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) {
            ++i;
        } else if (b[j].first < a[i].first) {
            ++j;
        } else {
            dot += (a[i].second - mean_a) * (b[j].second - mean_b);
            ++i;
            ++j;
        }
    }
    return dot;
}

}  // namespace

RankedList ubcf(const RatingMatrix& m, const UserId& user, std::size_t k,
                std::size_t neighbors) {
    if (!m.has_user(user)) {
        throw ColdUserError("user '" + user + "' has no train events");
    }
    const std::size_t target = m.user_index(user);
    const auto& target_row = m.user_row(target);
    if (target_row.empty()) {
        throw ColdUserError("user '" + user + "' has no train events");
    }
    const CenteredUser target_stats = center_stats(target_row);

    // Cosine similarity to every other user with a nonzero centered norm.
    std::vector<std::pair<double, std::size_t>> sims;
    if (target_stats.norm > 0.0) {
        sims.reserve(m.user_count());
        for (std::size_t v = 0; v < m.user_count(); ++v) {
            if (v == target) continue;
            const auto& row = m.user_row(v);
            if (row.empty()) continue;
            const CenteredUser vs = center_stats(row);
            if (vs.norm == 0.0) continue;
            const double dot = centered_dot(target_row, target_stats.mean, row, vs.mean);
            const double sim = dot / (target_stats.norm * vs.norm);
            if (sim > 0.0) sims.emplace_back(sim, v);
        }
    }
    const std::size_t keep = std::min(neighbors, sims.size());
    std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(keep),
                      sims.end(), [](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first > b.first;
                          return a.second < b.second;
                      });
    sims.resize(keep);

    // Similarity-weighted mean of the neighbors' centered ratings.
    std::map<std::uint32_t, std::pair<double, double>> accum;  // item -> (weighted sum, weight)
    for (const auto& [sim, v] : sims) {
        const auto& row = m.user_row(v);
        const CenteredUser vs = center_stats(row);
        for (const auto& [item, rating] : row) {
            if (m.user_has_item(target, item)) continue;
            auto& [num, den] = accum[item];
            num += sim * (rating - vs.mean);
            den += sim;
        }
    }

    std::vector<std::pair<double, std::uint32_t>> scored;
    scored.reserve(accum.size());
    for (const auto& [item, nd] : accum) {
        scored.emplace_back(target_stats.mean + nd.first / nd.second, item);
    }
    std::sort(scored.begin(), scored.end(), [&m](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return m.items()[a.second] < m.items()[b.second];
    });
    if (scored.size() > k) scored.resize(k);

    RankedList list;
    list.user = user;
    list.source = "ubcf";
    list.items.reserve(scored.size());
    for (const auto& [score, item] : scored) list.items.push_back(m.items()[item]);
    return list;
}

}  // namespace rankfuse
