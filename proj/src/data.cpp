#include "rankfuse/data.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "rankfuse/errors.hpp"

namespace rankfuse {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileAccessError("cannot open file: " + path.string());
    return in;
}

}  // namespace

InteractionLog parse_movielens(std::istream& in, const std::string& name) {
    InteractionLog log;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_tabs(line);
        if (fields.size() != 4) {
            throw MalformedLineError(name + ": expected 4 tab-separated fields, got " +
                                         std::to_string(fields.size()),
                                     line_number);
        }
        Event ev;
        ev.user = trim(fields[0]);
        ev.item = trim(fields[1]);
        double rating = 0.0;
        std::int64_t ts = 0;
        if (ev.user.empty() || ev.item.empty() || !parse_number(fields[2], rating) ||
            !parse_number(fields[3], ts)) {
            throw MalformedLineError(name + ": malformed field in '" + line + "'", line_number);
        }
        ev.rating = rating;
        ev.timestamp = ts;
        log.events.push_back(std::move(ev));
    }
    if (log.events.empty()) throw EmptyFileError(name + ": no events");
    return log;
}

InteractionLog load_movielens(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    return parse_movielens(in, path.string());
}

std::map<UserId, RankedList> parse_rankings(std::istream& in, const SourceId& source,
                                            const std::string& name) {
    std::map<UserId, RankedList> rankings;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_tabs(line);
        if (fields.size() < 2) {
            throw MalformedLineError(name + ": expected a user id and at least one item",
                                     line_number);
        }
        RankedList list;
        list.user = trim(fields[0]);
        list.source = source;
        if (list.user.empty()) {
            throw MalformedLineError(name + ": blank user id", line_number);
        }
        std::unordered_set<ItemId> seen;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            ItemId item = trim(fields[i]);
            if (item.empty()) {
                throw MalformedLineError(name + ": blank item id", line_number);
            }
            if (!seen.insert(item).second) {
                throw DuplicateItemInLineError(name + ": item '" + item +
                                               "' repeated for user '" + list.user +
                                               "' (line " + std::to_string(line_number) + ")");
            }
            list.items.push_back(std::move(item));
        }
        const UserId user = list.user;
        if (!rankings.emplace(user, std::move(list)).second) {
            throw DuplicateUserError(name + ": second ranking line for user '" + user +
                                     "' (line " + std::to_string(line_number) + ")");
        }
    }
    return rankings;
}

std::map<UserId, RankedList> load_rankings(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    return parse_rankings(in, path.stem().string(), path.string());
}

Split leave_two_out_split(const InteractionLog& log) {
    // Bucket event indices per user; stable sort keeps input order on
    // equal timestamps.
    std::map<UserId, std::vector<std::size_t>> per_user;
    for (std::size_t i = 0; i < log.events.size(); ++i) {
        per_user[log.events[i].user].push_back(i);
    }

    Split split;
    for (auto& [user, indices] : per_user) {
        std::stable_sort(indices.begin(), indices.end(), [&log](std::size_t a, std::size_t b) {
            const auto ta = log.events[a].timestamp.value_or(0);
            const auto tb = log.events[b].timestamp.value_or(0);
            return ta < tb;
        });
        // The tune holdout is the latest earlier event with an item
        // different from the test item, so the two holdouts stay
        // distinct even on logs with repeated items.
        std::size_t tune_pos = indices.size();
        if (indices.size() >= 3) {
            const ItemId& test_item = log.events[indices.back()].item;
            for (std::size_t i = indices.size() - 1; i-- > 0;) {
                if (log.events[indices[i]].item != test_item) {
                    tune_pos = i;
                    break;
                }
            }
        }
        if (tune_pos == indices.size()) {
            for (std::size_t i : indices) split.train.events.push_back(log.events[i]);
            continue;
        }
        split.test_holdout[user] = log.events[indices.back()].item;
        split.tune_holdout[user] = log.events[indices[tune_pos]].item;
        for (std::size_t i = 0; i + 1 < indices.size(); ++i) {
            if (i != tune_pos) split.train.events.push_back(log.events[indices[i]]);
        }
    }
    return split;
}

void write_movielens(const InteractionLog& log, std::ostream& out) {
    char buf[64];
    for (const Event& ev : log.events) {
        std::snprintf(buf, sizeof(buf), "%g", ev.rating.value_or(0.0));
        out << ev.user << '\t' << ev.item << '\t' << buf << '\t'
            << ev.timestamp.value_or(0) << '\n';
    }
}

void write_rankings(const std::map<UserId, RankedList>& rankings, std::ostream& out) {
    for (const auto& [user, list] : rankings) {
        out << user;
        for (const ItemId& item : list.items) out << '\t' << item;
        out << '\n';
    }
}

void write_holdout(const std::map<UserId, ItemId>& holdout, std::ostream& out) {
    for (const auto& [user, item] : holdout) {
        out << user << '\t' << item << '\n';
    }
}

std::map<UserId, ItemId> load_holdout(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    std::map<UserId, ItemId> holdout;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_tabs(line);
        if (fields.size() != 2 || trim(fields[0]).empty() || trim(fields[1]).empty()) {
            throw MalformedLineError(path.string() + ": expected 'user TAB item'", line_number);
        }
        if (!holdout.emplace(trim(fields[0]), trim(fields[1])).second) {
            throw DuplicateUserError(path.string() + ": second holdout for user '" +
                                     trim(fields[0]) + "' (line " +
                                     std::to_string(line_number) + ")");
        }
    }
    return holdout;
}

void write_ensemble_scores(const std::map<UserId, Ensemble>& ensembles, std::ostream& out) {
    char buf[64];
    for (const auto& [user, ensemble] : ensembles) {
        for (const ScoredItem& entry : ensemble.entries) {
            std::snprintf(buf, sizeof(buf), "%.17g", entry.score);
            out << user << '\t' << entry.item << '\t' << buf << '\n';
        }
    }
}

void write_split(const Split& split, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "train.tsv");
        if (!out) throw Error("cannot write " + (dir / "train.tsv").string());
        write_movielens(split.train, out);
    }
    {
        std::ofstream out(dir / "tune.tsv");
        if (!out) throw Error("cannot write " + (dir / "tune.tsv").string());
        write_holdout(split.tune_holdout, out);
    }
    {
        std::ofstream out(dir / "test.tsv");
        if (!out) throw Error("cannot write " + (dir / "test.tsv").string());
        write_holdout(split.test_holdout, out);
    }
}

}  // namespace rankfuse
