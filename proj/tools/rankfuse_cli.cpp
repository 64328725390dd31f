// rankfuse: rank-aggregation pipeline for unscored recommendation lists.
//
// Subcommands cover the full experiment flow: split, recommend,
// hybridize, evaluate, tune, bench, and a one-shot repro driver.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "rankfuse/bench.hpp"
#include "rankfuse/core.hpp"
#include "rankfuse/data.hpp"
#include "rankfuse/eval.hpp"
#include "rankfuse/hybrid.hpp"
#include "rankfuse/recommenders.hpp"
#include "rankfuse/rng.hpp"
#include "rankfuse/stats.hpp"
#include "rankfuse/tune.hpp"

namespace fs = std::filesystem;
using namespace rankfuse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path.string());
    return out;
}

// Loads every rankings file (best source first) and assembles one
// RecommendationSet per user present in all files. Users missing from
// any file are dropped with a note on stderr.
std::map<UserId, RecommendationSet> load_recommendation_sets(
    const std::vector<std::string>& paths) {
    if (paths.size() < 2) {
        throw TooFewSourcesError("need at least two rankings files, got " +
                                 std::to_string(paths.size()));
    }
    std::vector<std::map<UserId, RankedList>> sources;
    sources.reserve(paths.size());
    for (const std::string& p : paths) sources.push_back(load_rankings(p));

    std::map<UserId, RecommendationSet> sets;
    std::size_t dropped = 0;
    for (const auto& [user, list] : sources.front()) {
        RecommendationSet rs;
        rs.user = user;
        rs.lists.push_back(list);
        bool complete = true;
        for (std::size_t s = 1; s < sources.size(); ++s) {
            const auto it = sources[s].find(user);
            if (it == sources[s].end()) {
                complete = false;
                break;
            }
            rs.lists.push_back(it->second);
        }
        if (!complete) {
            ++dropped;
            continue;
        }
        require_valid(rs);
        sets.emplace(user, std::move(rs));
    }
    for (std::size_t s = 1; s < sources.size(); ++s) {
        for (const auto& [user, list] : sources[s]) {
            if (!sources.front().count(user)) ++dropped;
        }
    }
    if (dropped > 0) {
        std::cerr << "note: " << dropped << " user(s) not present in every rankings file were skipped\n";
    }
    return sets;
}

// A rankings file used as an evaluation input: position is the score
// signal, so entry p of a k-item list gets score k - p.
std::map<UserId, Ensemble> rankings_as_ensembles(const std::map<UserId, RankedList>& rankings) {
    std::map<UserId, Ensemble> ensembles;
    for (const auto& [user, list] : rankings) {
        Ensemble e;
        e.user = user;
        e.entries.reserve(list.items.size());
        for (std::size_t p = 0; p < list.items.size(); ++p) {
            e.entries.push_back({list.items[p],
                                 static_cast<double>(list.items.size() - p)});
        }
        ensembles.emplace(user, std::move(e));
    }
    return ensembles;
}

std::map<UserId, HoldoutPair> make_holdout_pairs(const std::map<UserId, ItemId>& first,
                                                 const std::map<UserId, ItemId>* second) {
    std::map<UserId, HoldoutPair> pairs;
    for (const auto& [user, item] : first) {
        HoldoutPair pair;
        pair.first = item;
        if (second) {
            if (const auto it = second->find(user); it != second->end()) {
                pair.second = it->second;
            }
        }
        pairs.emplace(user, pair);
    }
    return pairs;
}

std::map<UserId, RankedList> generate_recommendations(const RatingMatrix& matrix,
                                                      const std::string& method,
                                                      std::size_t k, std::size_t neighbors) {
    std::map<UserId, RankedList> out;
    std::size_t fallbacks = 0;
    for (const UserId& user : matrix.users()) {
        if (method == "most-popular") {
            out.emplace(user, most_popular(matrix, user, k));
            continue;
        }
        RankedList list;
        try {
            list = ubcf(matrix, user, k, neighbors);
        } catch (const ColdUserError&) {
            list.items.clear();
        }
        if (list.items.empty()) {
            // Cold or neighborless users are served by most-popular.
            list = most_popular(matrix, user, k);
            list.source = "ubcf+most-popular-fallback";
            ++fallbacks;
        }
        out.emplace(user, std::move(list));
    }
    if (fallbacks > 0) {
        std::cerr << "note: " << fallbacks << " user(s) served by most-popular fallback\n";
    }
    return out;
}

int cmd_split(const std::string& input, const std::string& out_dir) {
    const InteractionLog log = load_movielens(input);
    const Split split = leave_two_out_split(log);
    write_split(split, out_dir);
    std::cout << "events: " << log.events.size() << "\n"
              << "train events: " << split.train.events.size() << "\n"
              << "tune holdout users: " << split.tune_holdout.size() << "\n"
              << "test holdout users: " << split.test_holdout.size() << "\n";
    return kExitOk;
}

int cmd_recommend(const std::string& train, const std::string& method, std::size_t k,
                  std::size_t neighbors, const std::string& out_path) {
    const InteractionLog log = load_movielens(train);
    const RatingMatrix matrix(log);
    const auto rankings = generate_recommendations(matrix, method, k, neighbors);
    auto out = open_out(out_path);
    write_rankings(rankings, out);
    std::cout << "users: " << rankings.size() << "\nmethod: " << method << "\n";
    return kExitOk;
}

int cmd_hybridize(const std::vector<std::string>& ranking_paths, const std::string& method,
                  std::size_t n, std::uint64_t seed, bool pad, const std::string& out_path,
                  const std::string& scores_out) {
    if (method == "weighted" && n != 0) {
        std::cerr << "warning: --n is ignored by the weighted method\n";
    }
    const auto sets = load_recommendation_sets(ranking_paths);

    std::map<UserId, Ensemble> ensembles;
    std::map<UserId, RankedList> ordered;
    for (const auto& [user, rs] : sets) {
        Ensemble e = method == "weighted"
                         ? weighted_vote_hybrid(rs)
                         : semi_genetic_hybrid(rs, n, derive_seed(seed, user), pad);
        RankedList list;
        list.user = user;
        list.source = method;
        list.items.reserve(e.entries.size());
        for (const ScoredItem& entry : e.entries) list.items.push_back(entry.item);
        ordered.emplace(user, std::move(list));
        ensembles.emplace(user, std::move(e));
    }

    auto out = open_out(out_path);
    write_rankings(ordered, out);
    if (!scores_out.empty()) {
        auto sout = open_out(scores_out);
        write_ensemble_scores(ensembles, sout);
    }
    std::cout << "users hybridized: " << ensembles.size() << "\nmethod: " << method << "\n";
    return kExitOk;
}

int cmd_evaluate(const std::string& rankings_path, const std::string& holdout_path,
                 const std::string& holdout2_path, std::size_t k, const std::string& ap_out,
                 const std::string& cdf_out, std::size_t cdf_max) {
    const auto rankings = load_rankings(rankings_path);
    const auto ensembles = rankings_as_ensembles(rankings);
    const auto holdout = load_holdout(holdout_path);

    std::map<UserId, ItemId> holdout2;
    if (!holdout2_path.empty()) holdout2 = load_holdout(holdout2_path);
    const auto pairs =
        make_holdout_pairs(holdout, holdout2_path.empty() ? nullptr : &holdout2);

    const EvalReport report = map_at_k(ensembles, pairs, k);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", report.map_score);
    std::cout << "MAP@" << k << ": " << buf << "\nusers: " << report.users_evaluated << "\n";

    if (!ap_out.empty()) {
        auto out = open_out(ap_out);
        write_ap_csv(report, out);
    }
    if (!cdf_out.empty()) {
        const RankCdf cdf = rank_position_cdf(ensembles, holdout, cdf_max ? cdf_max : k);
        auto out = open_out(cdf_out);
        write_cdf_csv(cdf, out);
    }
    return kExitOk;
}

int cmd_tune(const std::vector<std::string>& ranking_paths, const std::string& holdout_path,
             const std::string& holdout2_path, std::size_t k, std::vector<std::size_t> grid,
             std::size_t repeats, std::size_t baseline_repeats, std::uint64_t seed,
             unsigned jobs, const std::string& out_path, const std::string& summary_path) {
    const auto sets = load_recommendation_sets(ranking_paths);
    const auto holdout = load_holdout(holdout_path);
    std::map<UserId, ItemId> holdout2;
    if (!holdout2_path.empty()) holdout2 = load_holdout(holdout2_path);
    const auto pairs =
        make_holdout_pairs(holdout, holdout2_path.empty() ? nullptr : &holdout2);

    if (grid.empty()) grid = default_grid();
    const auto results = grid_search(sets, pairs, grid, repeats, k, seed, jobs);

    // Baseline runtimes for the runtime-constrained selection.
    const std::vector<BenchConfig> baseline = {{"weighted", Method::WeightedVote, 0, seed}};
    const auto baseline_rows = bench_methods(sets, baseline, baseline_repeats);
    std::vector<Duration> baseline_runtimes;
    for (const BenchRow& row : baseline_rows) baseline_runtimes.push_back(row.runtime);

    if (!out_path.empty()) {
        auto out = open_out(out_path);
        write_grid_csv(results, out);
    }
    if (!summary_path.empty()) {
        auto out = open_out(summary_path);
        write_grid_summary_csv(results, out);
    }

    try {
        const std::size_t n = select_n(results, baseline_runtimes);
        std::cout << "selected n: " << n << "\n";
    } catch (const NoFeasibleNError& e) {
        std::cerr << "note: " << e.what() << "\n";
        std::size_t smallest = results.front().n;
        for (const GridResult& r : results) smallest = std::min(smallest, r.n);
        std::cerr << "note: falling back to the smallest grid point\n";
        std::cout << "selected n: " << smallest << "\n";
    }
    return kExitOk;
}

int cmd_bench(const std::vector<std::string>& ranking_paths, std::vector<std::size_t> semi_ns,
              bool weighted, std::size_t repeats, std::uint64_t seed, bool no_warmup,
              const std::string& out_path, const std::string& normalized_path,
              const std::string& baseline) {
    const auto sets = load_recommendation_sets(ranking_paths);

    std::vector<BenchConfig> configs;
    if (weighted) configs.push_back({"weighted", Method::WeightedVote, 0, seed});
    for (std::size_t n : semi_ns) {
        configs.push_back({"semi-genetic-n" + std::to_string(n), Method::SemiGenetic, n, seed});
    }
    if (configs.empty()) throw Error("no benchmark configurations requested");

    const auto rows = bench_methods(sets, configs, repeats, !no_warmup);
    if (!out_path.empty()) {
        auto out = open_out(out_path);
        write_bench_csv(rows, out);
    }
    if (!normalized_path.empty()) {
        const auto normalized = normalize_to_baseline(rows, baseline);
        auto out = open_out(normalized_path);
        write_normalized_csv(normalized, out);
    }
    for (const BenchConfig& config : configs) {
        std::vector<std::int64_t> ns;
        for (const BenchRow& row : rows) {
            if (row.method == config.label) ns.push_back(row.runtime.count());
        }
        std::cout << config.label << " median runtime: "
                  << static_cast<std::int64_t>(median(ns)) << " ns\n";
    }
    return kExitOk;
}

int cmd_repro(const std::string& input, const std::string& out_dir, std::size_t k,
              std::size_t repeats, std::uint64_t seed, std::size_t neighbors) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);

    std::cout << "== split ==\n";
    const InteractionLog log = load_movielens(input);
    const Split split = leave_two_out_split(log);
    write_split(split, dir);
    std::cout << "train events: " << split.train.events.size()
              << ", holdout users: " << split.test_holdout.size() << "\n";

    std::cout << "== recommend ==\n";
    const RatingMatrix matrix(split.train);
    const auto mp = generate_recommendations(matrix, "most-popular", k, neighbors);
    const auto cf = generate_recommendations(matrix, "ubcf", k, neighbors);
    {
        auto out = open_out(dir / "most_popular.tsv");
        write_rankings(mp, out);
    }
    {
        auto out = open_out(dir / "ubcf.tsv");
        write_rankings(cf, out);
    }

    const auto pairs = make_holdout_pairs(split.tune_holdout, &split.test_holdout);
    const EvalReport mp_report = map_at_k(rankings_as_ensembles(mp), pairs, k);
    const EvalReport cf_report = map_at_k(rankings_as_ensembles(cf), pairs, k);
    std::cout << "most-popular MAP@" << k << ": " << mp_report.map_score << "\n"
              << "ubcf MAP@" << k << ": " << cf_report.map_score << "\n";

    // Best source first.
    std::vector<std::string> files = {(dir / "ubcf.tsv").string(),
                                      (dir / "most_popular.tsv").string()};
    if (mp_report.map_score > cf_report.map_score) std::swap(files[0], files[1]);

    std::cout << "== tune ==\n";
    const auto sets = load_recommendation_sets(files);
    const std::vector<std::size_t> grid = {1000, 2000, 5000, 10000, 20000};
    const auto results = grid_search(sets, pairs, grid, repeats, k, seed);
    {
        auto out = open_out(dir / "grid_summary.csv");
        write_grid_summary_csv(results, out);
    }
    const std::vector<BenchConfig> baseline = {{"weighted", Method::WeightedVote, 0, seed}};
    const auto baseline_rows = bench_methods(sets, baseline, repeats);
    std::vector<Duration> baseline_runtimes;
    for (const BenchRow& row : baseline_rows) baseline_runtimes.push_back(row.runtime);
    std::size_t n;
    try {
        n = select_n(results, baseline_runtimes);
    } catch (const NoFeasibleNError&) {
        n = grid.front();
        std::cerr << "note: no grid point met the baseline runtime budget; "
                     "falling back to n = " << n << "\n";
    }
    std::cout << "selected n: " << n << "\n";

    std::cout << "== hybridize + evaluate ==\n";
    std::vector<double> semi_maps;
    for (std::size_t r = 0; r < repeats; ++r) {
        std::map<UserId, Ensemble> ensembles;
        for (const auto& [user, rs] : sets) {
            ensembles.emplace(user, semi_genetic_hybrid(rs, n, derive_seed(seed, n, r, user)));
        }
        semi_maps.push_back(map_at_k(ensembles, pairs, k).map_score);
    }
    std::map<UserId, Ensemble> voted;
    for (const auto& [user, rs] : sets) voted.emplace(user, weighted_vote_hybrid(rs));
    const double weighted_map = map_at_k(voted, pairs, k).map_score;
    std::cout << "semi-genetic median MAP@" << k << " over " << repeats
              << " seeds: " << median(semi_maps) << "\n"
              << "weighted MAP@" << k << ": " << weighted_map << "\n";

    std::cout << "== bench ==\n";
    const std::vector<BenchConfig> configs = {
        {"weighted", Method::WeightedVote, 0, seed},
        {"semi-genetic", Method::SemiGenetic, n, seed},
    };
    const auto rows = bench_methods(sets, configs, repeats);
    {
        auto out = open_out(dir / "bench.csv");
        write_bench_csv(rows, out);
    }
    {
        const auto normalized = normalize_to_baseline(rows, "weighted");
        auto out = open_out(dir / "bench_normalized.csv");
        write_normalized_csv(normalized, out);
    }
    for (const BenchConfig& config : configs) {
        std::vector<std::int64_t> ns;
        for (const BenchRow& row : rows) {
            if (row.method == config.label) ns.push_back(row.runtime.count());
        }
        std::cout << config.label << " median runtime: "
                  << static_cast<std::int64_t>(median(ns)) << " ns\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rank aggregation for unscored recommendation lists"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::uint64_t seed = 0;
    if (const char* env = std::getenv("RANKFUSE_SEED")) {
        seed = std::strtoull(env, nullptr, 10);
    }

    // split
    std::string input, out_dir;
    auto* split = app.add_subcommand("split", "leave-two-out split of an interaction log");
    split->add_option("--input", input, "MovieLens-format TSV")->required();
    split->add_option("--out-dir", out_dir, "output directory")->required();

    // recommend
    std::string train, method = "most-popular", out_path;
    std::size_t k = 1000, neighbors = 30;
    auto* recommend = app.add_subcommand("recommend", "generate source recommendations");
    recommend->add_option("--train", train, "train TSV (MovieLens format)")->required();
    recommend->add_option("--method", method, "most-popular or ubcf")
        ->check(CLI::IsMember({"most-popular", "ubcf"}));
    recommend->add_option("--k", k, "list length");
    recommend->add_option("--neighbors", neighbors, "ubcf neighborhood size");
    recommend->add_option("--out", out_path, "rankings output file")->required();

    // hybridize
    std::vector<std::string> ranking_paths;
    std::string hyb_method = "semi-genetic", scores_out;
    std::size_t n = 0;
    bool pad = false;
    auto* hybridize = app.add_subcommand("hybridize", "fuse rankings files (best source first)");
    hybridize->add_option("--rankings", ranking_paths, "rankings files, best first")
        ->required()
        ->expected(-1);
    hybridize->add_option("--method", hyb_method, "semi-genetic or weighted")
        ->check(CLI::IsMember({"semi-genetic", "weighted"}));
    hybridize->add_option("--n", n, "population size (semi-genetic)");
    hybridize->add_option("--seed", seed, "base RNG seed");
    hybridize->add_flag("--pad", pad, "append undrawn pool items by fitness");
    hybridize->add_option("--out", out_path, "ensemble rankings output")->required();
    hybridize->add_option("--scores-out", scores_out, "per-item scores output");

    // evaluate
    std::string holdout_path, holdout2_path, ap_out, cdf_out;
    std::size_t cdf_max = 0;
    auto* evaluate = app.add_subcommand("evaluate", "MAP@k of a rankings file");
    evaluate->add_option("--rankings", input, "rankings file to score")->required();
    evaluate->add_option("--holdout", holdout_path, "user TAB item holdout file")->required();
    evaluate->add_option("--holdout2", holdout2_path, "second holdout file");
    evaluate->add_option("--k", k, "cutoff");
    evaluate->add_option("--ap-out", ap_out, "per-user AP CSV");
    evaluate->add_option("--cdf-out", cdf_out, "rank-position CDF CSV (first holdout)");
    evaluate->add_option("--cdf-max", cdf_max, "CDF position bound (default k)");

    // tune
    std::vector<std::size_t> grid;
    std::size_t repeats = 50, baseline_repeats = 50;
    unsigned jobs = 1;
    std::string summary_path;
    auto* tune = app.add_subcommand("tune", "grid search for the population size");
    tune->add_option("--rankings", ranking_paths, "rankings files, best first")
        ->required()
        ->expected(-1);
    tune->add_option("--holdout", holdout_path, "tuning holdout file")->required();
    tune->add_option("--holdout2", holdout2_path, "second holdout file");
    tune->add_option("--k", k, "cutoff");
    tune->add_option("--grid", grid, "population sizes (default 1000..40000 step 1000)");
    tune->add_option("--repeats", repeats, "repeats per grid point");
    tune->add_option("--baseline-repeats", baseline_repeats, "weighted baseline repeats");
    tune->add_option("--seed", seed, "base RNG seed");
    tune->add_option("--jobs", jobs, "concurrent grid points (timings overlap when > 1)");
    tune->add_option("--out", out_path, "raw CSV output");
    tune->add_option("--summary-out", summary_path, "summary CSV output");

    // bench
    std::vector<std::size_t> semi_ns;
    bool weighted = false, no_warmup = false;
    std::string normalized_path, baseline = "weighted";
    auto* bench = app.add_subcommand("bench", "runtime benchmark of hybridization methods");
    bench->add_option("--rankings", ranking_paths, "rankings files, best first")
        ->required()
        ->expected(-1);
    bench->add_option("--semi", semi_ns, "semi-genetic config with this population size");
    bench->add_flag("--weighted", weighted, "include the weighted method");
    bench->add_option("--repeats", repeats, "timed repeats per config");
    bench->add_option("--seed", seed, "base RNG seed");
    bench->add_flag("--no-warmup", no_warmup, "skip the untimed warm-up pass");
    bench->add_option("--out", out_path, "raw CSV output");
    bench->add_option("--normalized-out", normalized_path, "normalized CSV output");
    bench->add_option("--baseline", baseline, "normalization baseline label");

    // repro
    auto* repro = app.add_subcommand("repro", "end-to-end pipeline on one interaction log");
    repro->add_option("--input", input, "MovieLens-format TSV")->required();
    repro->add_option("--out-dir", out_dir, "output directory")->required();
    repro->add_option("--k", k, "cutoff");
    repro->add_option("--repeats", repeats, "repeats for tuning and benchmarking");
    repro->add_option("--seed", seed, "base RNG seed");
    repro->add_option("--neighbors", neighbors, "ubcf neighborhood size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (split->parsed()) return cmd_split(input, out_dir);
        if (recommend->parsed()) return cmd_recommend(train, method, k, neighbors, out_path);
        if (hybridize->parsed())
            return cmd_hybridize(ranking_paths, hyb_method, n, seed, pad, out_path, scores_out);
        if (evaluate->parsed())
            return cmd_evaluate(input, holdout_path, holdout2_path, k, ap_out, cdf_out, cdf_max);
        if (tune->parsed())
            return cmd_tune(ranking_paths, holdout_path, holdout2_path, k, grid, repeats,
                            baseline_repeats, seed, jobs, out_path, summary_path);
        if (bench->parsed())
            return cmd_bench(ranking_paths, semi_ns, weighted, repeats, seed, no_warmup,
                             out_path, normalized_path, baseline);
        if (repro->parsed()) return cmd_repro(input, out_dir, k, repeats, seed, neighbors);
    } catch (const FileAccessError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const MalformedLineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const EmptyFileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DuplicateUserError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DuplicateItemInLineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const TooFewSourcesError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
