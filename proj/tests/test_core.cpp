#include <doctest.h>

#include <sstream>

#include "rankfuse/core.hpp"
#include "rankfuse/data.hpp"
#include "rankfuse/hybrid.hpp"
#include "rankfuse/rng.hpp"
#include "test_util.hpp"

using namespace rankfuse;
using namespace rankfuse::testutil;

TEST_CASE("minimal valid recommendation set") {
    const auto rs = make_rs({{"a", "b"}, {"b", "c"}});
    CHECK(validate_recommendation_set(rs).ok());
}

TEST_CASE("single list is too few sources") {
    const auto rs = make_rs({{"a", "a"}});
    CHECK(validate_recommendation_set(rs).issue == ValidationIssue::TooFewSources);
    CHECK_THROWS_AS(require_valid(rs), TooFewSourcesError);
}

TEST_CASE("within-list duplicate is rejected") {
    const auto rs = make_rs({{"a", "b"}, {"c", "c"}});
    CHECK(validate_recommendation_set(rs).issue == ValidationIssue::DuplicateItem);
    CHECK_THROWS_AS(require_valid(rs), DuplicateItemError);
}

TEST_CASE("user mismatch across lists is rejected") {
    auto rs = make_rs({{"a"}, {"b"}});
    rs.lists[1].user = "someone-else";
    CHECK(validate_recommendation_set(rs).issue == ValidationIssue::UserMismatch);
    CHECK_THROWS_AS(require_valid(rs), UserMismatchError);
}

TEST_CASE("empty list and blank item ids are rejected") {
    auto rs = make_rs({{"a"}, {}});
    CHECK(validate_recommendation_set(rs).issue == ValidationIssue::EmptyList);
    rs = make_rs({{"a"}, {"  "}});
    CHECK(validate_recommendation_set(rs).issue == ValidationIssue::EmptyItemId);
}

TEST_CASE("trim strips ascii whitespace") {
    CHECK(trim("  a b \t") == "a b");
    CHECK(trim("\r\n") == "");
    CHECK(trim("x") == "x");
}

TEST_CASE("ranked list round-trips through serialization") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::map<UserId, RankedList> rankings;
        const std::size_t users = 1 + static_cast<std::size_t>(rng.uniform() * 5);
        for (std::size_t u = 0; u < users; ++u) {
            RankedList list;
            list.user = "u" + std::to_string(u);
            list.source = "s";
            const std::size_t len = 1 + static_cast<std::size_t>(rng.uniform() * 20);
            for (std::size_t i = 0; i < len; ++i) {
                list.items.push_back("item" + std::to_string(i * 7 + u));
            }
            rankings.emplace(list.user, std::move(list));
        }
        std::ostringstream out;
        write_rankings(rankings, out);
        std::istringstream in(out.str());
        const auto parsed = parse_rankings(in, "s");
        REQUIRE(parsed.size() == rankings.size());
        for (const auto& [user, list] : rankings) {
            REQUIRE(parsed.count(user) == 1);
            CHECK(parsed.at(user).items == list.items);
        }
    }
}

TEST_CASE("produced ensembles are sorted by score") {
    const auto rs = make_rs({{"a", "b", "c", "d"}, {"c", "b", "e"}, {"e", "a"}});
    CHECK(scores_non_increasing(weighted_vote_hybrid(rs)));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CHECK(scores_non_increasing(semi_genetic_hybrid(rs, 200, seed)));
    }
}
