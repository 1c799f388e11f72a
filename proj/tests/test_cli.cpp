#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mws/graph_io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

// Runs the CLI with stderr discarded.
CliRun mws_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " '" MWS_CLI_PATH "' " + args + " 2>/dev/null";
    CliRun r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("mws_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string file(const std::string& name, const std::string& content) const {
        const fs::path p = dir_ / name;
        std::ofstream(p) << content;
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

// repulsive 0-2 (3); attractive 0-1 (2), 1-2 (1)
const char* kTriangle = "mws-graph v1\nV 3\n- 0 2 3\n+ 0 1 2\n+ 1 2 1\n";

} // namespace

TEST_F(Cli, SolveTriangle) {
    const std::string g = file("t.mws", kTriangle);
    const CliRun r = mws_cli("solve " + g + " --out " + path("a.txt"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "label 0 0\nlabel 1 0\nlabel 2 1\n");
    EXPECT_EQ(slurp(path("a.txt")), "+ 0\n- 0\n");
}

TEST_F(Cli, SolveEmptyGraph) {
    const CliRun r = mws_cli("solve " + file("e.mws", "mws-graph v1\nV 3\n"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "label 0 0\nlabel 1 1\nlabel 2 2\n");
}

TEST_F(Cli, SolveStatsAndRelaxedAgree) {
    const std::string g = file("t.mws", kTriangle);
    EXPECT_EQ(mws_cli("solve --stats " + g).out, mws_cli("solve --relax-c0 " + g).out);
    EXPECT_EQ(mws_cli("solve --naive " + g).out, mws_cli("solve " + g).out);
    const std::string cmd = "'" MWS_CLI_PATH "' solve --stats " + g + " 2>&1 >/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    ASSERT_NE(pipe, nullptr);
    std::array<char, 1024> buf{};
    const std::size_t n = fread(buf.data(), 1, buf.size(), pipe);
    pclose(pipe);
    const auto j = nlohmann::json::parse(std::string(buf.data(), n));
    EXPECT_EQ(j["merges"], 1);
    EXPECT_EQ(j["mutexes_added"], 1);
}

TEST_F(Cli, MalformedInputsExitOne) {
    EXPECT_EQ(mws_cli("solve " + file("bad.mws", "mws-graph v1\nV 2\n+ 0 5 1\n")).code, 1);
    EXPECT_EQ(mws_cli("solve " + file("bad2.mws", "not a graph\n")).code, 1);
    EXPECT_EQ(mws_cli("solve " + path("missing.mws")).code, 1);
    EXPECT_EQ(mws_cli("solve --no-such-flag " + file("t.mws", kTriangle)).code, 1);
    EXPECT_EQ(mws_cli("").code, 1);
    EXPECT_EQ(mws_cli("frobnicate").code, 1);
}

TEST_F(Cli, HelpOnEverySubcommand) {
    for (const char* sub : {"", "solve", "verify", "segment", "seeded", "metrics", "bench", "gen", "gen labels",
                            "gen affinities", "gen graph"}) {
        const CliRun r = mws_cli(std::string(sub) + " --help");
        EXPECT_EQ(r.code, 0) << sub;
        EXPECT_NE(r.out.find("Usage"), std::string::npos) << sub;
    }
    EXPECT_NE(mws_cli("solve --help").out.find("mws-graph v1"), std::string::npos);
}

TEST_F(Cli, VerifyZeroTrials) {
    const CliRun r = mws_cli("verify --trials 0");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("oracle_optimality 0/0"), std::string::npos);
}

TEST_F(Cli, VerifyPasses) {
    const CliRun r = mws_cli("verify --trials 100");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("all properties hold"), std::string::npos);
}

TEST_F(Cli, VerifyBrokenSolverWritesCounterexample) {
    const std::string ce = path("ce.mws");
    const CliRun r = mws_cli("verify --trials 30 --break-solver --counterexample " + ce);
    EXPECT_EQ(r.code, 2);
    ASSERT_TRUE(fs::exists(ce));
    EXPECT_NO_THROW(mws::read_graph(slurp(ce)));
    // re-enters solve directly
    EXPECT_EQ(mws_cli("solve " + ce).code, 0);
}

TEST_F(Cli, VerifySeedFromEnvironment) {
    EXPECT_EQ(mws_cli("verify --trials 5", "MWS_SEED=11").out, mws_cli("verify --trials 5 --seed 11").out);
    EXPECT_EQ(mws_cli("verify --trials 5", "MWS_SEED=banana").code, 1);
}

TEST_F(Cli, GenSegmentMetricsRoundTrip) {
    const std::string gt = path("gt"), aff = path("aff"), seg = path("seg");
    ASSERT_EQ(mws_cli("gen labels --shape 96x96 --seed 4 --out " + gt).code, 0);
    ASSERT_EQ(mws_cli("gen affinities --labels " + gt + " --out " + aff).code, 0);
    ASSERT_EQ(mws_cli("segment " + aff + " --out " + seg).code, 0);
    const CliRun m = mws_cli("metrics " + seg + " " + gt);
    ASSERT_EQ(m.code, 0);
    const auto j = nlohmann::json::parse(m.out);
    EXPECT_EQ(j["rand_f"].get<double>(), 1.0);
    EXPECT_EQ(j["vi_split"].get<double>(), 0.0);
    EXPECT_EQ(j["vi_merge"].get<double>(), 0.0);
}

TEST_F(Cli, ThresholdBaseline) {
    const std::string aff = path("aff"), seg = path("seg");
    ASSERT_EQ(mws_cli("gen affinities --shape 32x32 --seed 2 --out " + aff).code, 0);
    EXPECT_EQ(mws_cli("segment " + aff + " --baseline thresh --t 0.5 --out " + seg).code, 0);
    EXPECT_TRUE(fs::exists(seg + ".raw"));
    EXPECT_EQ(mws_cli("segment " + aff + " --baseline thresh --t 1.5 --out " + seg).code, 1);
}

TEST_F(Cli, SegmentWithMismatchedPattern) {
    const std::string aff = path("aff");
    ASSERT_EQ(mws_cli("gen affinities --shape 16x16 --out " + aff).code, 0);
    EXPECT_EQ(mws_cli("segment " + aff + " --pattern default3d --out " + path("seg")).code, 1);
    EXPECT_EQ(mws_cli("segment " + path("nothing") + " --out " + path("seg")).code, 1);
}

TEST_F(Cli, Seeded) {
    const std::string g = file("p.mws", "mws-graph v1\nV 3\n+ 0 1 0.8\n+ 1 2 0.3\n");
    const std::string s = file("s.txt", "0\n2\n");
    const CliRun r = mws_cli("seeded " + g + " " + s);
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "label 0 0\nlabel 1 0\nlabel 2 1\n");
    EXPECT_EQ(mws_cli("seeded --reference " + g + " " + s).out, r.out);
    EXPECT_EQ(mws_cli("seeded " + file("t.mws", kTriangle) + " " + s).code, 1);
    EXPECT_EQ(mws_cli("seeded " + g + " " + file("bad.txt", "7\n")).code, 1);
}

TEST_F(Cli, GenGraphIsDeterministic) {
    const CliRun a = mws_cli("gen graph --vertices 6 --edges 10 --seed 5");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, mws_cli("gen graph --vertices 6 --edges 10 --seed 5").out);
    EXPECT_NE(a.out, mws_cli("gen graph --vertices 6 --edges 10 --seed 6").out);
    EXPECT_NO_THROW(mws::read_graph(a.out));
    EXPECT_EQ(mws_cli("gen graph --weights nope").code, 1);

    const std::string g = file("g.mws", a.out);
    EXPECT_EQ(mws_cli("solve " + g).out, mws_cli("solve " + g).out);
}

TEST_F(Cli, GenVolumesAreDeterministic) {
    ASSERT_EQ(mws_cli("gen affinities --shape 2x16x16 --pattern default3d --seed 1 --out " + path("a")).code, 0);
    ASSERT_EQ(mws_cli("gen affinities --shape 2x16x16 --pattern default3d --seed 1 --out " + path("b")).code, 0);
    EXPECT_EQ(slurp(path("a.raw")), slurp(path("b.raw")));
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    EXPECT_EQ(mws_cli("gen labels --shape 0x4 --out " + path("l")).code, 1);
}

TEST_F(Cli, BenchWritesCsvAndFit) {
    const std::string csv = path("b.csv"), fit = path("fit.json");
    const CliRun r =
        mws_cli("bench --sizes 16x16 40x40 90x90 200x200 --repeats 3 --seed 1 --csv " + csv + " --fit " + fit);
    ASSERT_EQ(r.code, 0);
    std::istringstream lines(slurp(csv));
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header, "E,T_solve_s,T_sort_s,M,repeats");
    const auto j = nlohmann::json::parse(slurp(fit));
    EXPECT_EQ(j["rows"].size(), 4u);
    EXPECT_EQ(mws_cli("bench --sizes 16x16 --repeats 3").code, 1);
}
