#include "rankfuse/eval.hpp"

#include <algorithm>
#include <cstdio>

#include "rankfuse/errors.hpp"

namespace rankfuse {

namespace {

// 1-based rank of `item` within the top k ensemble entries, 0 if absent.
std::size_t rank_in_top_k(const Ensemble& ensemble, const ItemId& item, std::size_t k) {
    const std::size_t limit = std::min(k, ensemble.entries.size());
    for (std::size_t i = 0; i < limit; ++i) {
        if (ensemble.entries[i].item == item) return i + 1;
    }
    return 0;
}

}  // namespace

double average_precision_two(const Ensemble& ensemble, const HoldoutPair& holdout,
                             std::size_t k) {
    if (holdout.second && *holdout.second == holdout.first) {
        throw IdenticalHoldoutError("holdout items must be distinct: '" + holdout.first + "'");
    }

    std::vector<std::size_t> found;
    if (const std::size_t r = rank_in_top_k(ensemble, holdout.first, k); r > 0) {
        found.push_back(r);
    }
    if (holdout.second) {
        if (const std::size_t r = rank_in_top_k(ensemble, *holdout.second, k); r > 0) {
            found.push_back(r);
        }
    }
    std::sort(found.begin(), found.end());

    // Numerators assigned by ascending found rank; absent items
    // contribute nothing.
    double sum = 0.0;
    for (std::size_t i = 0; i < found.size(); ++i) {
        sum += static_cast<double>(i + 1) / static_cast<double>(found[i]);
    }
    return sum / 2.0;
}

EvalReport map_at_k(const std::map<UserId, Ensemble>& ensembles,
                    const std::map<UserId, HoldoutPair>& holdouts, std::size_t k) {
    if (holdouts.empty()) throw EmptyUserSetError("no holdout users to evaluate");

    EvalReport report;
    report.k = k;
    double total = 0.0;
    for (const auto& [user, holdout] : holdouts) {
        double ap = 0.0;
        if (const auto it = ensembles.find(user); it != ensembles.end()) {
            ap = average_precision_two(it->second, holdout, k);
        }
        report.per_user_ap[user] = ap;
        total += ap;
    }
    report.users_evaluated = holdouts.size();
    report.map_score = total / static_cast<double>(holdouts.size());
    return report;
}

RankCdf rank_position_cdf(const std::map<UserId, Ensemble>& ensembles,
                          const std::map<UserId, ItemId>& holdouts,
                          std::size_t k_max) {
    RankCdf cdf;
    cdf.k_max = k_max;
    cdf.counts.assign(k_max, 0);
    for (const auto& [user, item] : holdouts) {
        const auto it = ensembles.find(user);
        if (it == ensembles.end()) continue;
        const std::size_t r = rank_in_top_k(it->second, item, k_max);
        if (r > 0) ++cdf.counts[r - 1];
    }
    // Accumulate per-position hits into the CDF.
    for (std::size_t i = 1; i < cdf.counts.size(); ++i) {
        cdf.counts[i] += cdf.counts[i - 1];
    }
    return cdf;
}

void write_ap_csv(const EvalReport& report, std::ostream& out) {
    out << "user,ap\n";
    char buf[64];
    for (const auto& [user, ap] : report.per_user_ap) {
        std::snprintf(buf, sizeof(buf), "%.17g", ap);
        out << user << ',' << buf << '\n';
    }
}

void write_cdf_csv(const RankCdf& cdf, std::ostream& out) {
    out << "k,count\n";
    for (std::size_t k = 1; k <= cdf.k_max; ++k) {
        out << k << ',' << cdf.counts[k - 1] << '\n';
    }
}

}  // namespace rankfuse
