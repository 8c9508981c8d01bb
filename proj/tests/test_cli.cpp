#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

// The test harness exports BFBM_CLI with the path of the built binary.
std::string cli_path() {
    const char* p = std::getenv("BFBM_CLI");
    return p ? std::string(p) : std::string();
}

int run_cmd(const std::string& cmd) {
    int st = std::system(cmd.c_str());
    if (st == -1) return -1;
    if (WIFEXITED(st)) return WEXITSTATUS(st);
    return -2;
}

fs::path work_dir() {
    fs::path d = fs::temp_directory_path() / "bfbm_cli_tests";
    fs::create_directories(d);
    return d;
}

std::string read_file(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(static_cast<bool>(is));
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#') out.push_back(line);
    return out;
}

#define REQUIRE_CLI()                                   \
    std::string cli = cli_path();                       \
    if (cli.empty()) {                                  \
        WARN("BFBM_CLI not set; skipping CLI test");    \
        return;                                         \
    }                                                   \
    fs::path dir = work_dir()

}  // namespace

TEST_CASE("cli: parse errors exit with status 2") {
    REQUIRE_CLI();
    CHECK(run_cmd('"' + cli + "\" >/dev/null 2>&1") == 2);  // missing subcommand
    CHECK(run_cmd('"' + cli + "\" sample-bfbm --H 0.85 --T 2 >/dev/null 2>&1") == 2);
    CHECK(run_cmd('"' + cli + "\" covariance --H 0.85 --t1 1 --t2 1 >/dev/null 2>&1") == 2);
    CHECK(run_cmd('"' + cli + "\" no-such-command >/dev/null 2>&1") == 2);
}

TEST_CASE("cli: identity verification passes at the documented tolerance") {
    REQUIRE_CLI();
    fs::path out = dir / "identities.json";
    int rc = run_cmd('"' + cli + "\" verify-identities --H 0.85 --tol 1e-4 --out \"" +
                     out.string() + "\" >/dev/null 2>&1");
    CHECK(rc == 0);
    nlohmann::json j = nlohmann::json::parse(read_file(out));
    CHECK(j["all_pass"] == true);
    CHECK(j["subcommand"] == "verify-identities");
    REQUIRE(j["reports"].size() == 6);
    for (const auto& r : j["reports"]) {
        CHECK(r["pass"] == true);
        CHECK(r["status"] == "PASS");
    }
}

TEST_CASE("cli: closed covariance value in the JSON output") {
    REQUIRE_CLI();
    fs::path out = dir / "cov_closed.json";
    int rc = run_cmd('"' + cli +
                     "\" covariance --H 0.85 --t1 1 --t2 1 --s 0.5 --mode closed --out \"" +
                     out.string() + "\" >/dev/null 2>&1");
    CHECK(rc == 0);
    nlohmann::json j = nlohmann::json::parse(read_file(out));
    double v = j["value"].get<double>();
    CHECK(std::abs(v - 0.8401237365691517) < 1e-12);
    CHECK(j["config"]["mode"] == "closed");

    fs::path out_k = dir / "cov_kernel.json";
    rc = run_cmd('"' + cli +
                 "\" covariance --H 0.85 --t1 1 --t2 1 --s 0.5 --mode kernel --out \"" +
                 out_k.string() + "\" >/dev/null 2>&1");
    CHECK(rc == 0);
    nlohmann::json jk = nlohmann::json::parse(read_file(out_k));
    CHECK(std::abs(jk["value"].get<double>() - v) < 1e-6);
}

TEST_CASE("cli: repeated runs are byte identical") {
    REQUIRE_CLI();
    fs::path a = dir / "rep_a.csv";
    fs::path b = dir / "rep_b.csv";
    std::string args =
        " sample-bfbm --H 0.85 --method grem --tree binary --T 2 --replicas 50 --seed 99 --out ";
    CHECK(run_cmd('"' + cli + '"' + args + '"' + a.string() + "\" >/dev/null 2>&1") == 0);
    CHECK(run_cmd('"' + cli + '"' + args + '"' + b.string() + "\" >/dev/null 2>&1") == 0);
    std::string ca = read_file(a);
    CHECK(!ca.empty());
    CHECK(ca == read_file(b));
}

TEST_CASE("cli: output independent of the worker thread count") {
    REQUIRE_CLI();
    fs::path a = dir / "thr_a.csv";
    fs::path b = dir / "thr_b.csv";
    std::string args =
        " estimate-max --H 0.85 --tree yule --t-list 2 --replicas 60 --method grem --seed 31 --out ";
    CHECK(run_cmd("BFBM_THREADS=1 \"" + cli + '"' + args + '"' + a.string() +
                  "\" >/dev/null 2>&1") == 0);
    CHECK(run_cmd("BFBM_THREADS=4 \"" + cli + '"' + args + '"' + b.string() +
                  "\" >/dev/null 2>&1") == 0);
    CHECK(read_file(a) == read_file(b));
    std::string ja = read_file(fs::path(a.string() + ".json"));
    std::string jb = read_file(fs::path(b.string() + ".json"));
    CHECK(!ja.empty());
    CHECK(ja == jb);
}

TEST_CASE("cli: sampled tree files feed back into the endpoint sampler") {
    REQUIRE_CLI();
    fs::path tree = dir / "tree.csv";
    CHECK(run_cmd('"' + cli + "\" sample-tree --kind yule --T 2 --seed 5 --out \"" +
                  tree.string() + "\" >/dev/null 2>&1") == 0);
    std::string tc = read_file(tree);
    CHECK(tc.find("branch_id,parent_id,birth_time") != std::string::npos);

    fs::path out = dir / "from_tree.csv";
    CHECK(run_cmd('"' + cli + "\" sample-bfbm --H 0.85 --tree-file \"" + tree.string() +
                  "\" --method cholesky --replicas 10 --seed 3 --out \"" + out.string() +
                  "\" >/dev/null 2>&1") == 0);
    std::vector<std::string> rows = data_lines(read_file(out));
    REQUIRE(!rows.empty());
    CHECK(rows[0] == "replica,branch_id,value");
    CHECK(rows.size() > 10);
}

TEST_CASE("cli: discrete walk output has the documented shape") {
    REQUIRE_CLI();
    fs::path out = dir / "discrete.csv";
    CHECK(run_cmd('"' + cli +
                  "\" simulate-bfbm-discrete --alpha 0.45 --steps-per-unit 40 --tree yule"
                  " --T 3 --seed 7 --out \"" +
                  out.string() + "\" >/dev/null 2>&1") == 0);
    std::string text = read_file(out);
    CHECK(text.find("# subcommand=simulate-bfbm-discrete") != std::string::npos);
    std::vector<std::string> rows = data_lines(text);
    REQUIRE(rows.size() > 100);
    CHECK(rows[0] == "branch_id,t,value");
    for (std::size_t i = 1; i < rows.size(); i += 37) {
        std::istringstream is(rows[i]);
        std::string id, t, v;
        REQUIRE(std::getline(is, id, ','));
        REQUIRE(std::getline(is, t, ','));
        REQUIRE(std::getline(is, v, ','));
        double tv = std::stod(t);
        CHECK(tv >= 0.0);
        CHECK(tv <= 3.0 + 1.0 / 40.0);
        CHECK(std::isfinite(std::stod(v)));
    }
}

TEST_CASE("cli: renewal table output and sidecar constants") {
    REQUIRE_CLI();
    fs::path out = dir / "renewal.csv";
    CHECK(run_cmd('"' + cli + "\" renewal --H 0.85 --n-max 50 --out \"" + out.string() +
                  "\" >/dev/null 2>&1") == 0);
    std::vector<std::string> rows = data_lines(read_file(out));
    REQUIRE(rows.size() >= 52);  // header + q_0..q_50
    CHECK(rows[0] == "n,q");
    {
        std::istringstream is(rows[2]);  // the n = 1 row
        std::string n, q;
        REQUIRE(std::getline(is, n, ','));
        REQUIRE(std::getline(is, q, ','));
        CHECK(n == "1");
        CHECK(std::abs(std::stod(q) - 0.21541590210324926) < 1e-12);
    }
    nlohmann::json j = nlohmann::json::parse(read_file(fs::path(out.string() + ".json")));
    CHECK(j["q2_sum"].get<double>() > 1.0);
    CHECK(j["c1"].get<double>() > 0.0);
    CHECK(j["c2"].get<double>() > 0.0);
    CHECK(j["c3"].get<double>() > 0.0);
}

TEST_CASE("cli: linear walk rows cover every replica and site") {
    REQUIRE_CLI();
    fs::path out = dir / "linear.csv";
    CHECK(run_cmd('"' + cli + "\" simulate-linear --H 0.85 --n 100 --replicas 2 --seed 4 --out \"" +
                  out.string() + "\" >/dev/null 2>&1") == 0);
    std::vector<std::string> rows = data_lines(read_file(out));
    REQUIRE(rows.size() == 1 + 2 * 101);
    CHECK(rows[0] == "replica,t,S_n_t");
    CHECK(rows[1].rfind("0,0,", 0) == 0);
    CHECK(rows[102].rfind("1,0,", 0) == 0);
}

TEST_CASE("cli: prediction check reports one entry per level") {
    REQUIRE_CLI();
    fs::path out = dir / "predict.json";
    CHECK(run_cmd('"' + cli +
                  "\" predict-check --H 0.85 --t 1 --depth 2 --grid 32 --levels 2"
                  " --replicas 20 --seed 9 --out \"" +
                  out.string() + "\" >/dev/null 2>&1") == 0);
    nlohmann::json j = nlohmann::json::parse(read_file(out));
    REQUIRE(j["levels"].size() == 2);
    CHECK(j["levels"][0]["grid"] == 16);
    CHECK(j["levels"][1]["grid"] == 32);
    for (const auto& l : j["levels"]) {
        double nz = l["normalized"].get<double>();
        CHECK(std::isfinite(nz));
        CHECK(nz > 0.0);
    }
}
