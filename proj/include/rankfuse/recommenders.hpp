#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rankfuse/core.hpp"

namespace rankfuse {

/// Sparse user-item rating matrix built from train events. At most one
/// cell per (user, item): a later event overwrites an earlier one.
/// Immutable after construction.
class RatingMatrix {
public:
    explicit RatingMatrix(const InteractionLog& train);

    std::size_t user_count() const { return user_ids_.size(); }
    std::size_t item_count() const { return item_ids_.size(); }

    const std::vector<UserId>& users() const { return user_ids_; }
    const std::vector<ItemId>& items() const { return item_ids_; }

    /// Train interaction count per item index.
    const std::vector<std::uint32_t>& item_popularity() const { return item_popularity_; }

    bool has_user(const UserId& user) const { return user_index_.count(user) > 0; }
    std::size_t user_index(const UserId& user) const { return user_index_.at(user); }

    /// (item index, rating) cells of one user, in ascending item index.
    const std::vector<std::pair<std::uint32_t, float>>& user_row(std::size_t u) const {
        return rows_[u];
    }

    bool user_has_item(std::size_t u, std::uint32_t item) const;

private:
    std::vector<UserId> user_ids_;
    std::vector<ItemId> item_ids_;
    std::unordered_map<UserId, std::size_t> user_index_;
    std::unordered_map<ItemId, std::uint32_t> item_index_;
    std::vector<std::vector<std::pair<std::uint32_t, float>>> rows_;
    std::vector<std::uint32_t> item_popularity_;
};

/// Top-k items by descending train interaction count, excluding items
/// the user already interacted with. Ties by ascending ItemId. Output
/// is user-independent apart from the seen-item filter.
RankedList most_popular(const RatingMatrix& m, const UserId& user, std::size_t k);

/// User-based collaborative filtering: cosine similarity over
/// mean-centered rating vectors; an unseen item's predicted score is
/// the similarity-weighted mean of the most similar users' centered
/// ratings plus the target user's mean. Top-k by predicted score, ties
/// by ascending ItemId. Items without any neighbor rating are omitted.
/// Throws ColdUserError when the user has no train events; callers fall
/// back to most_popular. A user whose neighbors share no items yields
/// an empty list.
RankedList ubcf(const RatingMatrix& m, const UserId& user, std::size_t k,
                std::size_t neighbors = 30);

}  // namespace rankfuse
