// End-to-end checks of the command-line tool. Each case shells out to
// the built binary (path from the RANKFUSE_CLI environment variable).

#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

std::string cli() {
    const char* path = std::getenv("RANKFUSE_CLI");
    REQUIRE_MESSAGE(path != nullptr, "RANKFUSE_CLI must point at the binary");
    return path;
}

int run(const std::string& args) {
    const std::string cmd = cli() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("rankfuse_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

// 6 users x 6 items with timestamps; every user has >= 4 events.
const char* kTinyLog =
    "1\t10\t5\t100\n1\t11\t4\t200\n1\t12\t3\t300\n1\t13\t2\t400\n"
    "2\t10\t4\t100\n2\t12\t5\t200\n2\t14\t3\t300\n2\t11\t2\t400\n"
    "3\t10\t3\t100\n3\t13\t4\t200\n3\t15\t5\t300\n3\t12\t1\t400\n"
    "4\t11\t5\t100\n4\t14\t4\t200\n4\t10\t2\t300\n4\t15\t3\t400\n"
    "5\t12\t4\t100\n5\t15\t2\t200\n5\t11\t5\t300\n5\t14\t1\t400\n"
    "6\t13\t3\t100\n6\t10\t5\t200\n6\t14\t2\t300\n6\t12\t4\t400\n";

}  // namespace

TEST_CASE("split writes three files and reports holdout users") {
    TempDir dir;
    write_file(dir.path / "log.tsv", kTinyLog);
    CHECK(run("split --input " + (dir.path / "log.tsv").string() + " --out-dir " +
              (dir.path / "out").string()) == 0);
    CHECK(fs::exists(dir.path / "out" / "train.tsv"));
    CHECK(fs::exists(dir.path / "out" / "tune.tsv"));
    CHECK(fs::exists(dir.path / "out" / "test.tsv"));
}

TEST_CASE("split on a missing file exits with 2") {
    CHECK(run("split --input /no/such/file.tsv --out-dir /tmp/unused") == 2);
}

TEST_CASE("unknown method exits with 2") {
    TempDir dir;
    write_file(dir.path / "train.tsv", kTinyLog);
    CHECK(run("recommend --train " + (dir.path / "train.tsv").string() +
              " --method bogus --out " + (dir.path / "r.tsv").string()) == 2);
}

TEST_CASE("recommend then hybridize then evaluate") {
    TempDir dir;
    write_file(dir.path / "log.tsv", kTinyLog);
    REQUIRE(run("split --input " + (dir.path / "log.tsv").string() + " --out-dir " +
                (dir.path / "s").string()) == 0);
    REQUIRE(run("recommend --train " + (dir.path / "s" / "train.tsv").string() +
                " --method most-popular --k 10 --out " + (dir.path / "mp.tsv").string()) == 0);
    REQUIRE(run("recommend --train " + (dir.path / "s" / "train.tsv").string() +
                " --method ubcf --k 10 --out " + (dir.path / "cf.tsv").string()) == 0);
    REQUIRE(run("hybridize --rankings " + (dir.path / "cf.tsv").string() + " " +
                (dir.path / "mp.tsv").string() + " --method semi-genetic --n 500 --seed 42" +
                " --out " + (dir.path / "hyb.tsv").string()) == 0);
    CHECK(run("evaluate --rankings " + (dir.path / "hyb.tsv").string() + " --holdout " +
              (dir.path / "s" / "tune.tsv").string() + " --holdout2 " +
              (dir.path / "s" / "test.tsv").string() + " --k 10") == 0);
}

TEST_CASE("hybridize with one rankings file exits with 2") {
    TempDir dir;
    write_file(dir.path / "one.tsv", "u1\ta\tb\n");
    CHECK(run("hybridize --rankings " + (dir.path / "one.tsv").string() +
              " --method weighted --out " + (dir.path / "o.tsv").string()) == 2);
}

TEST_CASE("hybridize output is byte-identical across invocations") {
    TempDir dir;
    write_file(dir.path / "a.tsv", "u1\tx\ty\tz\nu2\tp\tq\tr\n");
    write_file(dir.path / "b.tsv", "u1\ty\tw\tx\nu2\tq\ts\tp\n");
    const std::string base = "hybridize --rankings " + (dir.path / "a.tsv").string() + " " +
                             (dir.path / "b.tsv").string() +
                             " --method semi-genetic --n 1000 --seed 7 --out ";
    REQUIRE(run(base + (dir.path / "o1.tsv").string() + " --scores-out " +
                (dir.path / "s1.tsv").string()) == 0);
    REQUIRE(run(base + (dir.path / "o2.tsv").string() + " --scores-out " +
                (dir.path / "s2.tsv").string()) == 0);
    CHECK(slurp(dir.path / "o1.tsv") == slurp(dir.path / "o2.tsv"));
    CHECK(slurp(dir.path / "s1.tsv") == slurp(dir.path / "s2.tsv"));
    CHECK(!slurp(dir.path / "o1.tsv").empty());
}

TEST_CASE("weighted hybridize ignores n with a warning but succeeds") {
    TempDir dir;
    write_file(dir.path / "a.tsv", "u1\tx\ty\n");
    write_file(dir.path / "b.tsv", "u1\ty\tz\n");
    CHECK(run("hybridize --rankings " + (dir.path / "a.tsv").string() + " " +
              (dir.path / "b.tsv").string() + " --method weighted --n 5 --out " +
              (dir.path / "o.tsv").string()) == 0);
    CHECK(slurp(dir.path / "o.tsv") == "u1\ty\tx\tz\n");
}

TEST_CASE("tune and bench emit csv outputs") {
    TempDir dir;
    write_file(dir.path / "a.tsv", "u1\tx\ty\tz\tw\nu2\tp\tq\tr\ts\n");
    write_file(dir.path / "b.tsv", "u1\ty\tv\tx\tu\nu2\tq\tt\tp\tn\n");
    write_file(dir.path / "h.tsv", "u1\tx\nu2\tq\n");
    CHECK(run("tune --rankings " + (dir.path / "a.tsv").string() + " " +
              (dir.path / "b.tsv").string() + " --holdout " + (dir.path / "h.tsv").string() +
              " --k 5 --grid 100 200 --repeats 3 --baseline-repeats 3 --seed 1 --out " +
              (dir.path / "grid.csv").string() + " --summary-out " +
              (dir.path / "summary.csv").string()) == 0);
    CHECK(slurp(dir.path / "grid.csv").rfind("n,repeat,map,runtime_ns\n", 0) == 0);

    CHECK(run("bench --rankings " + (dir.path / "a.tsv").string() + " " +
              (dir.path / "b.tsv").string() +
              " --weighted --semi 200 --repeats 5 --seed 1 --out " +
              (dir.path / "bench.csv").string() + " --normalized-out " +
              (dir.path / "norm.csv").string()) == 0);
    CHECK(slurp(dir.path / "norm.csv").rfind("method,repeat,relative_runtime\n", 0) == 0);
}

TEST_CASE("repro runs the whole pipeline on a tiny log") {
    TempDir dir;
    write_file(dir.path / "log.tsv", kTinyLog);
    CHECK(run("repro --input " + (dir.path / "log.tsv").string() + " --out-dir " +
              (dir.path / "out").string() + " --k 6 --repeats 5 --seed 3") == 0);
    CHECK(fs::exists(dir.path / "out" / "grid_summary.csv"));
    CHECK(fs::exists(dir.path / "out" / "bench_normalized.csv"));
}
