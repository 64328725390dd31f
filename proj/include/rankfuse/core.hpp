#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rankfuse/errors.hpp"

namespace rankfuse {

// Identifiers are normalized to strings so that the same core serves
// integer movie ids and name strings alike. Must be non-empty after
// trimming.
using ItemId = std::string;
using UserId = std::string;
using SourceId = std::string;

/// Strips leading and trailing ASCII whitespace.
std::string trim(const std::string& s);

/// One source recommender's ordered item list for one user. Position is
/// the only signal; the item at position p has rank p (1-based).
struct RankedList {
    UserId user;
    SourceId source;
    std::vector<ItemId> items;
};

/// Two or more ranked lists for the same user, best source first.
struct RecommendationSet {
    UserId user;
    std::vector<RankedList> lists;
};

enum class Method { SemiGenetic, WeightedVote };

struct ScoredItem {
    ItemId item;
    double score;
};

/// Fused output of a hybridization method: scored items in
/// non-increasing score order, no duplicates, every item drawn from the
/// originating recommendation set.
struct Ensemble {
    UserId user;
    std::vector<ScoredItem> entries;
    Method method = Method::WeightedVote;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> population_size;
};

/// A single user-item event. Rating and timestamp are optional; events
/// with equal timestamps keep their input order.
struct Event {
    UserId user;
    ItemId item;
    std::optional<double> rating;
    std::optional<std::int64_t> timestamp;
};

struct InteractionLog {
    std::vector<Event> events;
};

/// Leave-two-out split: per user the last event is the test holdout,
/// the second-to-last the tuning holdout, the rest train data.
struct Split {
    InteractionLog train;
    std::map<UserId, ItemId> tune_holdout;
    std::map<UserId, ItemId> test_holdout;
};

enum class ValidationIssue {
    Ok,
    DuplicateItem,
    TooFewSources,
    UserMismatch,
    EmptyList,
    EmptyItemId,
};

struct ValidationResult {
    ValidationIssue issue = ValidationIssue::Ok;
    std::string message;

    bool ok() const { return issue == ValidationIssue::Ok; }
};

/// Checks all RecommendationSet invariants without throwing.
ValidationResult validate_recommendation_set(const RecommendationSet& rs);

/// Same check, but throws the matching typed error on failure.
void require_valid(const RecommendationSet& rs);

}  // namespace rankfuse
