#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Outcome {
    int code = -1;
    std::string out, err;
    std::vector<Json> records() const {
        std::vector<Json> v;
        std::istringstream in(out);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) v.push_back(Json::parse(line));
        return v;
    }
};

const fs::path& scratch() {
    static fs::path d = [] {
        std::mt19937_64 rng(std::random_device{}());
        fs::path p = fs::temp_directory_path() / ("iwb-cli-" + std::to_string(rng()));
        fs::create_directories(p);
        return p;
    }();
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome run(const std::string& args, const std::string& cache = "cache") {
    fs::path out = scratch() / "stdout", err = scratch() / "stderr";
    std::string cmd = "cd '" + std::string(IWB_SOURCE_DIR) + "' && WORKBENCH_CACHE='" + (scratch() / cache).string() +
                      "' '" + IWB_CLI + "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
    int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

struct RemoveScratch : ::testing::Environment {
    void TearDown() override { fs::remove_all(scratch()); }
};

const auto* const kCleanup = ::testing::AddGlobalTestEnvironment(new RemoveScratch);

}  // namespace

TEST(Cli, InputErrorsExitTwo) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("invariants").code, 2);
    EXPECT_EQ(run("invariants --series data/curves.jsonl").code, 2);
    EXPECT_EQ(run("invariants --series does-not-exist.jsonl").code, 2);
    EXPECT_EQ(run("symbols --curves data/curves.jsonl --curve 32a --level 64").code, 2);
    EXPECT_EQ(run("theta --curves data/curves.jsonl --curve 32a --twist -12").code, 2);
    EXPECT_EQ(run("theta --curves data/curves.jsonl --curve 99z").code, 2);
    EXPECT_EQ(run("--p 4 theta --curves data/curves.jsonl --curve 32a").code, 2);
    EXPECT_EQ(run("--trunc 100 theta --curves data/curves.jsonl --curve 32a").code, 2);
    auto bad = scratch() / "bad.jsonl";
    write(bad, "{\"schema\":\"iwb.series\",\"version\":1}\n{\"p\":3,\"N\":20,\"coefficients\":[\"x\"]}\n");
    Outcome r = run("invariants --series '" + bad.string() + "'");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("not a rational"), std::string::npos) << r.err;
}

TEST(Cli, ComputationalFailureExitsOne) {
    Outcome r = run("theta --curves data/curves.jsonl --curve 11a1");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("a_p"), std::string::npos) << r.err;
    EXPECT_EQ(run("--strict-paper-hypotheses --p 3 fudge --curves data/curves.jsonl --curve 11a1 --field -7 "
                  "--sigma data/fixtures/sigma_11a1.jsonl")
                  .code,
              1);
    auto rows = scratch() / "rows_unknown.jsonl";
    write(rows, "{\"schema\":\"iwb.table\",\"version\":1}\n{\"curve\":\"32a\",\"D\":-7,\"p\":3}\n");
    EXPECT_EQ(run("--n-max 4 table --curves data/curves.jsonl --rows '" + rows.string() + "'").code, 1);
}

TEST(Cli, ReportHeader) {
    Outcome r = run("invariants --series data/fixtures/series_pair.jsonl");
    ASSERT_EQ(r.code, 0) << r.err;
    auto recs = r.records();
    ASSERT_EQ(recs.size(), 3u);
    EXPECT_EQ(recs[0], (Json{{"schema", "iwb.report"}, {"version", 1}, {"command", "invariants"}}));
    EXPECT_EQ(recs[1]["profile"]["lambda"], 2);
    EXPECT_EQ(recs[2]["profile"]["profile"], "{(3:1/3)}");
}

TEST(Cli, SymbolsCacheMissThenHit) {
    Outcome a = run("symbols --curves data/curves.jsonl --curve 40a1 --level 40 --sign +", "symcache");
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.records()[1]["cache"], "miss");
    EXPECT_NE(a.err.find("cache miss"), std::string::npos);
    Outcome b = run("symbols --curves data/curves.jsonl --curve 40a1 --level 40 --sign +", "symcache");
    EXPECT_EQ(b.records()[1]["cache"], "hit");
    EXPECT_EQ(a.records()[1]["values"], b.records()[1]["values"]);
}

TEST(Cli, ThetaRoundTripsThroughSeriesFile) {
    auto series = scratch() / "theta_series.jsonl";
    Outcome t = run("--n-max 4 theta --curves data/curves.jsonl --curve 32a --twist -43 --series-out '" +
                series.string() + "'");
    ASSERT_EQ(t.code, 0) << t.err;
    auto recs = t.records();
    ASSERT_EQ(recs.size(), 5u);  // header, config, +, -, ratio
    Outcome inv = run("invariants --series '" + series.string() + "'");
    ASSERT_EQ(inv.code, 0) << inv.err;
    auto got = inv.records();
    ASSERT_EQ(got.size(), 3u);
    EXPECT_EQ(got[1]["profile"]["lambda"], recs[2]["profile"]["lambda"]);
    EXPECT_EQ(got[1]["profile"]["profile"], recs[2]["profile"]["profile"]);
    EXPECT_EQ(got[2]["profile"]["profile"], recs[3]["profile"]["profile"]);
}

TEST(Cli, OutputIsDeterministic) {
    std::string a = run("--n-max 4 theta --curves data/curves.jsonl --curve 56a1 --twist -139").out;
    std::string b = run("--n-max 4 -j 3 theta --curves data/curves.jsonl --curve 56a1 --twist -139", "other").out;
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, b);
}

TEST(Cli, TableRow) {
    auto rows = scratch() / "rows_one.jsonl";
    write(rows, "{\"schema\":\"iwb.table\",\"version\":1}\n{\"curve\":\"32a\",\"D\":-107,\"p\":3}\n");
    auto out = scratch() / "table.jsonl";
    Outcome r = run("-o '" + out.string() + "' table --curves data/curves.jsonl --rows '" + rows.string() + "'");
    ASSERT_EQ(r.code, 0) << r.err;
    std::string text = slurp(out);
    EXPECT_NE(text.find("\"expected_match\":true"), std::string::npos);
    EXPECT_NE(text.find("\"verdict\":\"verified-under-stated-route\""), std::string::npos);
    EXPECT_NE(text.find("\"matched\":1"), std::string::npos);
}

TEST(Cli, CoprimeAndC2) {
    Outcome c = run("coprime --f data/fixtures/series_pair.jsonl");
    ASSERT_EQ(c.code, 0) << c.err;
    EXPECT_EQ(c.records()[1]["method"], "slope-disjoint");
    EXPECT_EQ(c.records()[1]["verdict"], "coprime");
    Outcome v = run("c2 --series data/fixtures/series2_c2.jsonl --var T --phi 0,1");
    ASSERT_EQ(v.code, 0) << v.err;
    EXPECT_EQ(v.records()[1]["length"], 2);
    Outcome pf = run("c2 --series data/fixtures/series2_pushforward.jsonl");
    ASSERT_EQ(pf.code, 0) << pf.err;
    EXPECT_EQ(pf.records()[1]["profile"]["lambda"], 1);
    EXPECT_EQ(pf.records()[1]["divisor"]["completeness"], "partial-with-pushforward");
    Outcome sp = run("specialize --series data/fixtures/series2_c2.jsonl");
    ASSERT_EQ(sp.code, 0) << sp.err;
    EXPECT_EQ(sp.records()[1]["profile"]["mu"], 2);
    EXPECT_EQ(sp.records()[2]["zero_within_precision"], true);
}

TEST(Cli, Fudge) {
    Outcome r = run("fudge --curves data/curves.jsonl --curve 11a1 --field -7 --sigma data/fixtures/sigma_11a1.jsonl "
                "--frobenius data/fixtures/frobenius_11a1.jsonl --p 5");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("1*(5, S) + 1*(5, T)"), std::string::npos);
    EXPECT_NE(r.out.find("\"ledger\""), std::string::npos);
    Outcome cm = run("fudge --curves data/curves.jsonl --curve 32a --field -43 --sigma data/fixtures/sigma_32a.jsonl");
    ASSERT_EQ(cm.code, 0) << cm.err;
    EXPECT_NE(cm.out.find("\"text\":\"0\""), std::string::npos) << cm.out;
}

TEST(Cli, ConfigFile) {
    auto ini = scratch() / "run.ini";
    write(ini, "n-max = 4\np = 3\n");
    Outcome r = run("--config '" + ini.string() + "' theta --curves data/curves.jsonl --curve 32a --sign +");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.records()[1]["config"]["n_max"], 4);
    EXPECT_EQ(r.records()[1]["config"]["D"], 80);
}
