#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cgpclf/serialize.hpp"
#include "helpers.hpp"

using namespace cgpclf;

TEST(GenomeJson, RoundTripProperty) {
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const GenomeConfig c{1 + uniform_index(rng, 20), 1 + uniform_index(rng, 60), 1 + uniform_index(rng, 3),
                             bernoulli(rng, 0.5)};
        const auto g = random_genome(c, c.recurrent ? 0.2 : 0.0, rng);
        const auto j = genome_to_json(g, trial);
        const auto back = genome_from_json(json::parse(j.dump()));
        ASSERT_EQ(back, g);
        ASSERT_EQ(genome_to_json(back, trial).dump(), j.dump());
    }
}

TEST(GenomeJson, Layout) {
    const auto g = testing_helpers::build_genome(2, {{Function::Mul, {0, 1}}, {Function::Sub, {2, 0}}}, {3});
    const auto j = genome_to_json(g, 7);
    EXPECT_EQ(j["config"]["n_inputs"], 2);
    EXPECT_EQ(j["config"]["arity"], 2);
    EXPECT_EQ(j["function_genes"], json::parse("[2, 1]"));
    EXPECT_EQ(j["connection_genes"], json::parse("[[0, 1], [2, 0]]"));
    EXPECT_EQ(j["output_genes"], json::parse("[3]"));
    EXPECT_EQ(j["seed"], 7);
}

TEST(GenomeJson, MalformedInputsAreRejected) {
    const auto good = genome_to_json(testing_helpers::build_genome(2, {{Function::Add, {0, 1}}}, {2}));
    auto expect_malformed = [](const json& j) {
        try {
            genome_from_json(j);
            FAIL() << j.dump();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::MalformedGenomeFile) << j.dump();
        }
    };
    auto j = good;
    j.erase("output_genes");
    expect_malformed(j);
    j = good;
    j["function_genes"] = json::parse("[9]");
    expect_malformed(j);
    j = good;
    j["connection_genes"] = json::parse("[[0, 5]]");  // forward reference in a feed-forward genome
    expect_malformed(j);
    j = good;
    j["connection_genes"] = json::parse("[[0]]");
    expect_malformed(j);
    j = good;
    j["connection_genes"] = json::parse("[[0, -1]]");
    expect_malformed(j);
    j = good;
    j["config"]["n_inputs"] = -2;
    expect_malformed(j);
    j = good;
    j["config"]["arity"] = 3;
    expect_malformed(j);
    j = good;
    j["output_genes"] = "x";
    expect_malformed(j);
}

TEST(GenomeJson, LoadFromDisk) {
    const auto dir = std::filesystem::temp_directory_path() / "cgpclf_serialize_test";
    std::filesystem::create_directories(dir);
    const auto g = testing_helpers::build_genome(3, {{Function::DivProtected, {0, 2}}}, {3});
    write_json((dir / "g.json").string(), genome_to_json(g));
    EXPECT_EQ(load_genome((dir / "g.json").string()), g);
    std::ofstream(dir / "bad.json") << "{ not json";
    try {
        load_genome((dir / "bad.json").string());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MalformedGenomeFile);
    }
    try {
        load_genome((dir / "missing.json").string());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Io);
    }
    std::filesystem::remove_all(dir);
}

TEST(Tables, PercentCellsAndHeader) {
    Summary s;
    s.mean = 0.74567;
    s.sd = 0.0049;
    s.n = 10;
    EXPECT_EQ(percent_cell(s), "74.57 (0.49)");
    EXPECT_EQ(percent_cell(std::nullopt), "-");
    const auto t = summary_table({{"CGP", s, std::nullopt, s}});
    EXPECT_EQ(t, "method,Train % (SD),Validation % (SD),Test % (SD)\nCGP,74.57 (0.49),-,74.57 (0.49)\n");
}
