#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>

#include "rankfuse/core.hpp"

namespace rankfuse {

/// Parses a MovieLens-format interaction file: tab-separated lines of
/// user_id, item_id, rating (1-5), unix timestamp. One event per line.
InteractionLog load_movielens(const std::filesystem::path& path);
InteractionLog parse_movielens(std::istream& in, const std::string& name = "<stream>");

/// Parses a rankings file: one line per user, user_id followed by items
/// in rank order, tab-separated. The source label of every list is set
/// to `source`.
std::map<UserId, RankedList> load_rankings(const std::filesystem::path& path);
std::map<UserId, RankedList> parse_rankings(std::istream& in, const SourceId& source,
                                            const std::string& name = "<stream>");

/// Leave-two-out split. Per user, events are ordered by (timestamp,
/// input order); the last goes to the test holdout, the second-to-last
/// to the tuning holdout, the rest to train. Users with fewer than
/// three events contribute everything to train and appear in no holdout.
Split leave_two_out_split(const InteractionLog& log);

// Serialization. Rankings round-trip bit-exactly through
// write_rankings / parse_rankings.
void write_movielens(const InteractionLog& log, std::ostream& out);
void write_rankings(const std::map<UserId, RankedList>& rankings, std::ostream& out);
void write_holdout(const std::map<UserId, ItemId>& holdout, std::ostream& out);
std::map<UserId, ItemId> load_holdout(const std::filesystem::path& path);

/// Ensemble scores as TSV lines: user, item, score. Score formatting is
/// locale-independent and byte-stable for identical inputs.
void write_ensemble_scores(const std::map<UserId, Ensemble>& ensembles, std::ostream& out);

/// Writes the three split files (train.tsv, tune.tsv, test.tsv) into a
/// directory.
void write_split(const Split& split, const std::filesystem::path& dir);

}  // namespace rankfuse
