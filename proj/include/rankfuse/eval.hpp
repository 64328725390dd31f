#pragma once

#include <map>
#include <optional>
#include <ostream>

#include "rankfuse/core.hpp"

namespace rankfuse {

/// The two left-out items of one user. The second item may be absent
/// when only a single holdout is available.
struct HoldoutPair {
    ItemId first;
    std::optional<ItemId> second;
};

struct EvalReport {
    std::size_t k = 0;
    std::map<UserId, double> per_user_ap;
    double map_score = 0.0;
    std::size_t users_evaluated = 0;
};

/// Cumulative distribution of holdout rank positions: counts[k-1] is
/// the number of holdout items ranked at position <= k.
struct RankCdf {
    std::size_t k_max = 0;
    std::vector<std::uint64_t> counts;
};

/// Average precision of (up to) two left-out items within the top k
/// entries of an ensemble. Numerators 1 and 2 are assigned by ascending
/// found rank; items absent from the top k contribute 0. Result in [0, 1].
double average_precision_two(const Ensemble& ensemble, const HoldoutPair& holdout,
                             std::size_t k);

/// MAP@k over all holdout users. A user without an ensemble scores 0
/// and is still counted.
EvalReport map_at_k(const std::map<UserId, Ensemble>& ensembles,
                    const std::map<UserId, HoldoutPair>& holdouts, std::size_t k);

/// Rank-position CDF over users with one holdout item each.
RankCdf rank_position_cdf(const std::map<UserId, Ensemble>& ensembles,
                          const std::map<UserId, ItemId>& holdouts,
                          std::size_t k_max);

// CSV output for plotting. Columns: user,ap and k,count.
void write_ap_csv(const EvalReport& report, std::ostream& out);
void write_cdf_csv(const RankCdf& cdf, std::ostream& out);

}  // namespace rankfuse
