// Drives the built cgpclf binary end to end.
#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cgpclf/serialize.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;
using namespace cgpclf;

namespace {

struct Result {
    int status = 0;
    std::string out;
};

Result run(const std::string& args) {
    const std::string cmd = std::string(CGPCLF_CLI_PATH) + " " + args + " 2>&1";
    Result r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, "popen failed"};
    std::array<char, 4096> buf;
    while (auto n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
    const int s = pclose(p);
    r.status = WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Relative path -> contents for every file below `root`.
std::map<std::string, std::string> tree(const fs::path& root) {
    std::map<std::string, std::string> m;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) m[fs::relative(e.path(), root).string()] = slurp(e.path());
    return m;
}

fs::path only_subdir(const fs::path& root) {
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(root))
        if (e.is_directory()) dirs.push_back(e.path());
    EXPECT_EQ(dirs.size(), 1u) << root;
    return dirs.empty() ? root : dirs.front();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("cgpclf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        data_ = (dir_ / "data.csv").string();
        ASSERT_EQ(run("gen-data --signal linear --seed 5 -o " + data_).status, 0);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& rel) const { return (dir_ / rel).string(); }

    fs::path dir_;
    std::string data_;
};

}  // namespace

TEST_F(Cli, GenDataStdoutMatchesFile) {
    const auto r = run("gen-data --signal linear --seed 5");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out, slurp(data_));
    const auto d = load_csv(data_, LayoutDescriptor::dcm16());
    EXPECT_EQ(d.count(1), 39u);
    EXPECT_EQ(d.count(0), 111u);
}

TEST_F(Cli, EveryRunCommandIsByteReproducible) {
    const std::vector<std::string> commands{
        "split --data " + data_ + " --seed 2",
        "balance --data " + data_ + " --seed 2",
        "train --data " + data_ + " --seed 2 --iterations 150 --runs 3 --baselines --mlp-epochs 20",
        "train --data " + data_ + " --seed 2 --iterations 100 --runs 2 --recurrent true --balance",
        "cv --data " + data_ + " --seed 2 --k-folds 3 --repeats 2 --iterations 60 --baselines --mlp-epochs 10",
    };
    for (std::size_t c = 0; c < commands.size(); ++c) {
        const auto a = path("a" + std::to_string(c)), b = path("b" + std::to_string(c));
        const bool parallel = c >= 2;  // train and cv take --jobs
        const auto ra = run(commands[c] + " --out " + a + (parallel ? " --jobs 1" : ""));
        const auto rb = run(commands[c] + " --out " + b + (parallel ? " --jobs 3" : ""));
        ASSERT_EQ(ra.status, 0) << ra.out;
        ASSERT_EQ(rb.status, 0) << rb.out;
        const auto ta = tree(only_subdir(a)), tb = tree(only_subdir(b));
        EXPECT_GE(ta.size(), 3u);
        EXPECT_TRUE(ta.count("config.json") && ta.count("summary.csv")) << commands[c];
        EXPECT_TRUE(ta == tb) << commands[c];
    }
}

TEST_F(Cli, RunDirectoryNaming) {
    ASSERT_EQ(run("split --data " + data_ + " --seed 17 --out " + path("o")).status, 0);
    const auto name = only_subdir(path("o")).filename().string();
    EXPECT_EQ(name.rfind("split-", 0), 0u) << name;
    EXPECT_EQ(name.substr(name.size() - 3), "-17") << name;
}

TEST_F(Cli, TrainWritesGenomesGraphsAndTable) {
    const auto r = run("train --data " + data_ + " --iterations 50 --runs 2 --out " + path("o") + " --run-name t");
    ASSERT_EQ(r.status, 0) << r.out;
    const auto t = tree(path("o/t"));
    for (const char* f : {"genomes/run00.json", "genomes/run01.json", "graphs/run00.dot", "graphs/run01.dot",
                          "results.json", "split.json"})
        EXPECT_TRUE(t.count(f)) << f;
    EXPECT_EQ(t.at("summary.csv").rfind("method,Train % (SD),Validation % (SD),Test % (SD)\nCGP,", 0), 0u);
    const auto g = load_genome(path("o/t/genomes/run01.json"));
    EXPECT_EQ(t.at("graphs/run01.dot"), to_dot(g));
    const auto res = json::parse(t.at("results.json"));
    EXPECT_EQ(res["batch"]["runs"][1]["genome"], json::parse(t.at("genomes/run01.json")));
}

TEST_F(Cli, DryRunTouchesNothing) {
    const auto r = run("train --data " + data_ + " --dry-run --out " + path("o"));
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("config ok"), std::string::npos);
    EXPECT_FALSE(fs::exists(path("o")));
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
    std::ofstream(path("c.ini")) << "[evolution]\niterations = 40\nruns = 2\nmutation_rate = 0.2\n"
                                 << "[output]\nrun_name = fromcfg\n";
    const auto r = run("train --data " + data_ + " --config " + path("c.ini") + " --runs 3 --out " + path("o"));
    ASSERT_EQ(r.status, 0) << r.out;
    const auto c = json::parse(slurp(path("o/fromcfg/config.json")))["evolution"];
    EXPECT_EQ(c["max_iterations"], 40);
    EXPECT_EQ(c["n_runs"], 3);
    EXPECT_EQ(c["mutation_rate"], 0.2);

    std::ofstream(path("bad.ini")) << "[nonsense]\niterations = 4\n";
    EXPECT_NE(run("train --data " + data_ + " --config " + path("bad.ini")).status, 0);
}

TEST_F(Cli, FailedRunMovesPartialOutput) {
    const auto one_class = testing_helpers::constant_dataset(6, 0, 16);
    save_csv(path("one.csv"), one_class);
    const auto r = run("balance --data " + path("one.csv") + " --out " + path("o") + " --run-name broken");
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.out.find("SingleClass"), std::string::npos) << r.out;
    EXPECT_FALSE(fs::exists(path("o/broken")));
    EXPECT_TRUE(fs::exists(path("o/failed/broken/config.json")));
}

TEST_F(Cli, CvMinimumFoldsAndMajorityRow) {
    const auto r = run("cv --data " + data_ + " --k-folds 3 --repeats 1 --iterations 20 --no-balance --out " +
                       path("o") + " --run-name cv");
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("Majority,-,-,74.00 (0.00)"), std::string::npos) << r.out;
    const auto res = json::parse(slurp(path("o/cv/results.json")));
    EXPECT_EQ(res["cells"].size(), 3u);
    EXPECT_TRUE(res["plan"]["balance"].is_null());
    EXPECT_NE(run("cv --data " + data_ + " --k-folds 2 --out " + path("o")).status, 0);
}

TEST_F(Cli, DecodePassthroughAndFixpoint) {
    const auto g = testing_helpers::build_genome(16, {{Function::Add, {0, 1}}}, {0});
    write_json(path("g.json"), genome_to_json(g));
    const auto r = run("decode " + path("g.json") + " --json " + path("g2.json"));
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_EQ(r.out.rfind("x0\nuses 1 of 16 inputs\n", 0), 0u) << r.out;
    EXPECT_EQ(slurp(path("g.dot")), to_dot(g));
    ASSERT_EQ(run("decode " + path("g2.json") + " --json " + path("g3.json") + " --dot " + path("g3.dot")).status, 0);
    EXPECT_EQ(slurp(path("g2.json")), slurp(path("g3.json")));
    EXPECT_EQ(load_genome(path("g3.json")), g);

    std::ofstream(path("bad.json")) << R"({"config": {"n_inputs": 2}})";
    const auto bad = run("decode " + path("bad.json"));
    EXPECT_NE(bad.status, 0);
    EXPECT_NE(bad.out.find("MalformedGenomeFile"), std::string::npos) << bad.out;
}

TEST_F(Cli, ReportReadsRunDirectories) {
    ASSERT_EQ(run("train --data " + data_ + " --iterations 30 --runs 2 --out " + path("o") + " --run-name t").status, 0);
    const auto r = run("report " + path("o/t"));
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("train: 2 runs"), std::string::npos);
    EXPECT_NE(r.out.find(slurp(path("o/t/summary.csv"))), std::string::npos) << r.out;
    EXPECT_NE(run("report " + path("o/t/config.json")).status, 0);
}
