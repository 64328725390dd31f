#include "rankfuse/core.hpp"

#include <cctype>
#include <string_view>
#include <unordered_set>

namespace rankfuse {

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

namespace {

bool is_blank(const std::string& s) {
    for (unsigned char c : s) {
        if (!std::isspace(c)) return false;
    }
    return true;
}

}  // namespace

ValidationResult validate_recommendation_set(const RecommendationSet& rs) {
    if (rs.lists.size() < 2) {
        return {ValidationIssue::TooFewSources,
                "hybridization requires at least two source lists, got " +
                    std::to_string(rs.lists.size())};
    }
    // Views into the list being checked; hoisted so the table's storage
    // is reused across lists.
    std::unordered_set<std::string_view> seen;
    for (std::size_t s = 0; s < rs.lists.size(); ++s) {
        const RankedList& list = rs.lists[s];
        if (list.user != rs.user) {
            return {ValidationIssue::UserMismatch,
                    "list " + std::to_string(s) + " belongs to user '" + list.user +
                        "', expected '" + rs.user + "'"};
        }
        if (list.items.empty()) {
            return {ValidationIssue::EmptyList, "list " + std::to_string(s) + " is empty"};
        }
        seen.clear();
        seen.reserve(list.items.size());
        for (const ItemId& item : list.items) {
            if (is_blank(item)) {
                return {ValidationIssue::EmptyItemId,
                        "list " + std::to_string(s) + " contains a blank item id"};
            }
            if (!seen.insert(item).second) {
                return {ValidationIssue::DuplicateItem,
                        "item '" + item + "' repeated within list " + std::to_string(s)};
            }
        }
    }
    return {};
}

void require_valid(const RecommendationSet& rs) {
    const ValidationResult r = validate_recommendation_set(rs);
    switch (r.issue) {
        case ValidationIssue::Ok:
            return;
        case ValidationIssue::DuplicateItem:
            throw DuplicateItemError(r.message);
        case ValidationIssue::TooFewSources:
            throw TooFewSourcesError(r.message);
        case ValidationIssue::UserMismatch:
            throw UserMismatchError(r.message);
        case ValidationIssue::EmptyList:
        case ValidationIssue::EmptyItemId:
            throw EmptyListError(r.message);
    }
}

}  // namespace rankfuse
