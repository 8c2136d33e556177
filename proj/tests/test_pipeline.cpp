#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "adjvar/pipeline.hpp"

using namespace adjvar;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("adjvar_pipeline_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_synthetic(const fs::path& dir, std::size_t cases, std::uint64_t seed) {
    ScenarioConfig sc;
    sc.cases = cases;
    sc.judges = 20;
    sc.nationalities = 4;
    sc.courts = 3;
    sc.first_year = 1996;
    sc.last_year = 2010;
    sc.base_rate = 0.3;
    sc.climate_effect = 0.2;
    sc.pending_rate = 0.05;
    sc.seed = seed;
    const auto path = dir / "input.csv";
    write_corpus(path.string(), generate(sc));
    return path;
}

RunConfig small_run(const fs::path& input, const fs::path& out, const std::string& command) {
    RunConfig cfg;
    cfg.command = command;
    cfg.input = input.string();
    cfg.output_dir = out.string();
    cfg.seed = 11;
    cfg.replicates = 4;
    cfg.sample_size = 500;
    cfg.trees = 10;
    cfg.tree_sample_cap = 200;
    return cfg;
}

nlohmann::json load_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

std::map<std::string, std::string> output_hashes(const nlohmann::json& manifest) {
    std::map<std::string, std::string> out;
    for (const auto& s : manifest["stages"])
        for (const auto& o : s["outputs"]) out[o["file"].get<std::string>()] = o["sha256"].get<std::string>();
    return out;
}

}  // namespace

TEST(Sha256, KnownVectors) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Describe, YearlyCountsMatchDirectTally) {
    ScenarioConfig sc;
    sc.cases = 3000;
    sc.pending_rate = 0.1;
    sc.seed = 5;
    const auto corpus = generate(sc);
    const auto rep = describe(corpus);

    std::map<int, std::pair<std::size_t, std::size_t>> tally;
    std::size_t pending = 0;
    for (const auto& r : corpus.records) {
        if (!r.decided()) {
            ++pending;
            continue;
        }
        auto& t = tally[r.decision_date->year()];
        ++t.first;
        t.second += r.decision == Decision::Grant;
    }
    EXPECT_EQ(rep.pending, pending);
    ASSERT_EQ(rep.years.size(), tally.size());
    for (const auto& y : rep.years) {
        EXPECT_EQ(y.cases, tally[y.year].first);
        EXPECT_EQ(y.grants, tally[y.year].second);
    }
    std::size_t custody_total = 0;
    for (const auto& c : rep.custody) custody_total += c.count;
    EXPECT_EQ(custody_total, corpus.records.size());
    for (const auto& d : rep.duration) {
        EXPECT_LE(d.p25_days, d.median_days);
        EXPECT_LE(d.median_days, d.p75_days);
        EXPECT_GE(d.p25_days, 0.0);
    }
}

TEST(Describe, EmptyCorpusThrows) { EXPECT_THROW(describe(Corpus{}), std::invalid_argument); }

TEST(CorrelationData, RowsAreDecidedRecords) {
    ScenarioConfig sc;
    sc.cases = 800;
    sc.pending_rate = 0.2;
    sc.seed = 9;
    const auto corpus = generate(sc);
    const auto scores = score_corpus(corpus.records, build_index(corpus.records));
    const auto d = build_correlation_data(corpus, scores);
    EXPECT_EQ(d.features.rows(), scores.proceedings.size());
    for (const auto& [name, v] : d.targets) EXPECT_EQ(v.size(), d.features.rows()) << name;
    EXPECT_GE(d.features.find("decision"), 0);
    EXPECT_GE(d.features.find("judge_id"), 0);
    EXPECT_GE(d.features.find("custody_isnull"), 0);
    EXPECT_EQ(d.features.find("nonexistent"), -1);
}

TEST(Pipeline, ReportWritesEveryStageAndHashesMatch) {
    const auto dir = scratch("report");
    const auto input = write_synthetic(dir, 2000, 3);
    const auto cfg = small_run(input, dir / "out", "report");
    std::ostringstream err;
    ASSERT_EQ(run_pipeline(cfg, err), 0) << err.str();
    EXPECT_FALSE(fs::exists(dir / "out" / "FAILED"));

    const auto m = load_json(dir / "out" / "manifest.json");
    std::vector<std::string> stages;
    for (const auto& s : m["stages"]) {
        stages.push_back(s["name"]);
        EXPECT_EQ(s["status"], "ok");
    }
    EXPECT_EQ(stages, (std::vector<std::string>{"ingest", "describe", "score", "correlate", "predict", "trend"}));
    EXPECT_EQ(m["seed"], 11);
    EXPECT_EQ(m["inputs"][0]["sha256"], sha256_hex(read_file(input.string())));

    const auto hashes = output_hashes(m);
    for (const char* f : {"corpus.csv", "proceeding_scores.csv", "judge_scores.csv", "importances_gamma.csv",
                          "predict.json", "weekly_series.csv", "trend_decomposition.csv", "trend.json"}) {
        ASSERT_TRUE(hashes.count(f)) << f;
    }
    for (const auto& [file, hash] : hashes) {
        EXPECT_EQ(sha256_hex(read_file((dir / "out" / file).string())), hash) << file;
    }
}

TEST(Pipeline, RerunIsByteIdentical) {
    const auto dir = scratch("rerun");
    const auto input = write_synthetic(dir, 1500, 8);
    std::ostringstream err;
    auto a = small_run(input, dir / "a", "report");
    auto b = small_run(input, dir / "b", "report");
    b.threads = 1;
    ASSERT_EQ(run_pipeline(a, err), 0) << err.str();
    ASSERT_EQ(run_pipeline(b, err), 0) << err.str();
    const auto ha = output_hashes(load_json(dir / "a" / "manifest.json"));
    const auto hb = output_hashes(load_json(dir / "b" / "manifest.json"));
    EXPECT_FALSE(ha.empty());
    EXPECT_EQ(ha, hb);
    set_max_threads(0);
}

TEST(Pipeline, SeedChangesCorrelateOutput) {
    const auto dir = scratch("seed");
    const auto input = write_synthetic(dir, 1500, 8);
    std::ostringstream err;
    auto a = small_run(input, dir / "a", "correlate");
    auto b = small_run(input, dir / "b", "correlate");
    b.seed = 12;
    ASSERT_EQ(run_pipeline(a, err), 0);
    ASSERT_EQ(run_pipeline(b, err), 0);
    EXPECT_NE(read_file((dir / "a" / "importances_gamma.csv").string()),
              read_file((dir / "b" / "importances_gamma.csv").string()));
}

TEST(Pipeline, MissingInputLeavesFailedMarker) {
    const auto dir = scratch("missing");
    const auto cfg = small_run(dir / "nope.csv", dir / "out", "score");
    std::ostringstream err;
    EXPECT_NE(run_pipeline(cfg, err), 0);
    ASSERT_TRUE(fs::exists(dir / "out" / "FAILED"));
    const auto marker = read_file((dir / "out" / "FAILED").string());
    EXPECT_EQ(marker.rfind("[ingest]", 0), 0u) << marker;
    EXPECT_NE(err.str().find("[ingest]"), std::string::npos);
    const auto m = load_json(dir / "out" / "manifest.json");
    EXPECT_EQ(m["stages"].back()["status"], "failed");
}

TEST(Pipeline, FailedMarkerClearedOnSuccess) {
    const auto dir = scratch("clear");
    std::ostringstream err;
    EXPECT_NE(run_pipeline(small_run(dir / "nope.csv", dir / "out", "ingest"), err), 0);
    const auto input = write_synthetic(dir, 300, 1);
    EXPECT_EQ(run_pipeline(small_run(input, dir / "out", "ingest"), err), 0);
    EXPECT_FALSE(fs::exists(dir / "out" / "FAILED"));
}

TEST(Pipeline, AllNullGammaSkipsPartisanshipModels) {
    const auto dir = scratch("nullgamma");
    ScenarioConfig sc;
    sc.cases = 1000;
    sc.seed = 2;
    auto corpus = generate(sc);
    for (auto& r : corpus.records) r.climate.reset();
    const auto scores = score_corpus(corpus.records, build_index(corpus.records));
    RunConfig cfg;
    cfg.command = "predict";
    cfg.output_dir = (dir / "out").string();
    RunContext ctx(cfg);
    stage_predict(ctx, corpus, scores);
    const auto j = load_json(dir / "out" / "predict.json");
    for (const auto& s : j["feature_sets"]) {
        const auto name = s["name"].get<std::string>();
        const bool uses_gamma = name.find("partisanship") != std::string::npos;
        EXPECT_EQ(s["skipped"].get<bool>(), uses_gamma) << name;
    }
}

TEST(Pipeline, SimulateHonoursScenarioFile) {
    const auto dir = scratch("simulate");
    std::ofstream(dir / "scenario.txt") << "cases = 250\njudges = 5\n";
    RunConfig cfg;
    cfg.command = "simulate";
    cfg.scenario = (dir / "scenario.txt").string();
    cfg.output_dir = (dir / "out").string();
    std::ostringstream err;
    ASSERT_EQ(run_pipeline(cfg, err), 0) << err.str();
    std::ifstream in(dir / "out" / "corpus.csv");
    std::size_t lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    EXPECT_EQ(lines, 251u);
}

TEST(Pipeline, MismatchedReferenceTablesRejected) {
    const auto dir = scratch("tables");
    const auto input = write_synthetic(dir, 200, 1);
    auto cfg = small_run(input, dir / "out", "ingest");
    cfg.administrations = input.string();
    std::ostringstream err;
    EXPECT_NE(run_pipeline(cfg, err), 0);
    EXPECT_NE(err.str().find("--state-votes"), std::string::npos);
}

TEST(Cli, HelpAndBadArguments) {
    const std::string cli = ADJVAR_CLI;
    EXPECT_EQ(std::system((cli + " --help > /dev/null").c_str()), 0);
    EXPECT_NE(std::system((cli + " score > /dev/null 2>&1").c_str()), 0);
    EXPECT_NE(std::system((cli + " correlate --input /dev/null --alpha 2 > /dev/null 2>&1").c_str()), 0);
}

TEST(Cli, SimulateThenScore) {
    const auto dir = scratch("cli");
    const std::string cli = ADJVAR_CLI;
    const auto sim = dir / "sim";
    ASSERT_EQ(std::system((cli + " simulate --seed 4 --output-dir " + sim.string() + " > /dev/null").c_str()), 0);
    const auto out = dir / "score";
    ASSERT_EQ(std::system((cli + " score --judge-weighted --input " + (sim / "corpus.csv").string() +
                           " --output-dir " + out.string() + " > /dev/null")
                              .c_str()),
              0);
    const auto summary = load_json(out / "score_summary.json");
    EXPECT_EQ(summary["weighting"], "per_judge");
    EXPECT_GT(summary["proceedings_with_gamma"].get<std::size_t>(), 0u);
}
