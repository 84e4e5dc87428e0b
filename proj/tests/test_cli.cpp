#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cga/ga/history.h"
#include "cli.h"
#include "cli_io.h"
#include "support.h"

namespace cga {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "cga");
  std::vector<const char *> argv;
  for (const auto &a: args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return { code, out.str(), err.str() };
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  return { std::istreambuf_iterator<char>(in), {} };
}

class Cli: public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::path(CGA_TEST_TMP) / ::testing::UnitTest::GetInstance()
                                        ->current_test_info()
                                        ->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  fs::path write(const std::string &name, const std::string &text) {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  // Stats over the first 300 sample molecules; small enough to be quick.
  fs::path small_stats() {
    std::string text;
    for (const auto &s: test::read_smiles(test::data_path("zinc_sample_5k.smi"),
                                          300))
      text += s + "\n";
    const auto ds = write("small.smi", text);
    const auto stats = dir_ / "small.json";
    EXPECT_EQ(run({ "stats", "--dataset", ds.string(), "--out",
                    stats.string() })
                  .code,
              0);
    return stats;
  }

  fs::path dir_;
};

TEST_F(Cli, StatsOnTwoLines) {
  const auto ds = write("two.smi", "C\nCC\n");
  const auto out = dir_ / "two.json";
  const Result r = run({ "stats", "--dataset", ds.string(), "--out", out.string() });
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = cli::read_json(out);
  EXPECT_EQ(doc.at("dataset").at("parsed"), 2);
  EXPECT_EQ(doc.at("dataset").at("skipped"), 0);
  EXPECT_EQ(doc.at("fingerprint").at("bits"), 2048);
  EXPECT_TRUE(fs::exists(dir_ / "two.fragments.tsv"));
}

TEST_F(Cli, StatsSkipsBadLines) {
  std::string text;
  const auto good = test::read_smiles(test::data_path("zinc_sample_5k.smi"), 99);
  for (std::size_t i = 0; i < good.size(); ++i) {
    if (i == 40)
      text += "C1CC(not smiles\n";
    text += good[i] + " ZINC" + std::to_string(i) + "\n";
  }
  const auto ds = write("hundred.smi", text);
  const auto out = dir_ / "hundred.json";
  const Result r = run({ "stats", "--dataset", ds.string(), "--out", out.string() });
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = cli::read_json(out);
  EXPECT_EQ(doc.at("dataset").at("total"), 100);
  EXPECT_EQ(doc.at("dataset").at("parsed"), 99);
  EXPECT_EQ(doc.at("dataset").at("skipped"), 1);
  EXPECT_NE(r.err.find("skipped 1"), std::string::npos);
}

TEST_F(Cli, StatsErrors) {
  const auto one = write("one.smi", "C\n");
  EXPECT_EQ(run({ "stats", "--dataset", one.string(), "--out",
                  (dir_ / "x.json").string() })
                .code,
            1);
  EXPECT_EQ(run({ "stats", "--dataset", (dir_ / "missing.smi").string(),
                  "--out", (dir_ / "x.json").string() })
                .code,
            1);
  EXPECT_EQ(run({ "stats" }).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({ "bogus" }).code, 2);
}

TEST_F(Cli, StatsMatchLibraryOnSample) {
  const auto out = dir_ / "sample.json";
  ASSERT_EQ(run({ "stats", "--dataset", test::data_path("zinc_sample_5k.smi"),
                  "--out", out.string() })
                .code,
            0);
  const auto mols = test::sample_molecules();
  const FragmentTable table = FragmentTable::build(mols);
  const ScoringModel loaded = cli::load_model(out);
  EXPECT_EQ(loaded.stats, compute_stats(mols, table));
  EXPECT_EQ(loaded.fragments, table);
  EXPECT_EQ(loaded.alphabet, alphabet_from(mols));
}

TEST_F(Cli, ScoreBreakdown) {
  const auto stats = small_stats();
  const Result r = run({ "score", "CCO", "--stats", stats.string(), "--json" });
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  const double j = doc.at("z_logp").get<double>() - doc.at("z_sa").get<double>()
                   - doc.at("z_ring").get<double>();
  EXPECT_NEAR(doc.at("j").get<double>(), j, 1e-12);

  const Result text = run({ "score", "CCO", "--stats", stats.string() });
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("ring_penalty"), std::string::npos);
}

TEST_F(Cli, ScoreOrdersRingSizes) {
  const auto stats = small_stats();
  auto j_of = [&](const char *smiles) {
    const Result r = run({ "score", smiles, "--stats", stats.string(), "--json" });
    EXPECT_EQ(r.code, 0) << r.err;
    return nlohmann::json::parse(r.out).at("j").get<double>();
  };
  EXPECT_LT(j_of("CC1CCCCCCC1"), j_of("CC1CCCCC1"));
}

TEST_F(Cli, ScoreParseErrorNamesOffset) {
  const auto stats = small_stats();
  const Result r = run({ "score", "C(", "--stats", stats.string() });
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("offset 2"), std::string::npos) << r.err;
  EXPECT_EQ(run({ "score", "CCO" }).code, 2);  // no stats source
}

TEST_F(Cli, EvolveArtifactsAreDeterministic) {
  const auto stats = small_stats();
  auto evolve = [&](const std::string &out) {
    return run({ "evolve", "--target", "CC(=O)Nc1ccc(O)cc1", "--delta", "0.6",
                 "--generations", "2", "--population-size", "10",
                 "--offspring", "40", "--seed", "7", "--stats", stats.string(),
                 "--out-dir", (dir_ / out).string() });
  };
  ASSERT_EQ(evolve("a").code, 0);
  ASSERT_EQ(evolve("b").code, 0);
  for (const char *f: { "run.history.json", "run.history.csv", "run.final.tsv",
                        "run.scaffold.json" }) {
    ASSERT_TRUE(fs::exists(dir_ / "a" / f)) << f;
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
  const auto h = history_from_json(cli::read_json(dir_ / "a/run.history.json"));
  EXPECT_EQ(h.config.seed, 7u);
  EXPECT_EQ(h.generations.size(), 3u);
  const auto report = cli::read_json(dir_ / "a/run.scaffold.json");
  EXPECT_EQ(report.at("target_scaffold"), "c1ccccc1");
  EXPECT_TRUE(report.contains("config"));
  EXPECT_NE(slurp(dir_ / "a/run.final.tsv").find("# config {"), std::string::npos);
}

TEST_F(Cli, EvolveZeroGenerations) {
  const auto stats = small_stats();
  const Result r = run({ "evolve", "--target", "CCCO", "--generations", "0",
                         "--population-size", "5", "--stats", stats.string(),
                         "--out-dir", dir_.string(), "--json" });
  ASSERT_EQ(r.code, 0) << r.err;
  const auto h = history_from_json(cli::read_json(dir_ / "run.history.json"));
  ASSERT_EQ(h.generations.size(), 1u);
  EXPECT_EQ(h.generations[0].generation, 0);
}

TEST_F(Cli, EvolveUsageErrors) {
  const auto stats = small_stats();
  EXPECT_EQ(run({ "evolve", "--stats", stats.string() }).code, 2);
  EXPECT_EQ(run({ "evolve", "--target", "CCO", "--targets-file", "x" }).code, 2);
  EXPECT_EQ(run({ "evolve", "--target", "CCO", "--delta", "1.5", "--stats",
                  stats.string() })
                .code,
            2);
  EXPECT_EQ(run({ "evolve", "--target", "C(", "--stats", stats.string() }).code,
            2);
  EXPECT_EQ(run({ "evolve", "--target", "CCO", "--delta", "abc" }).code, 2);
}

TEST_F(Cli, BatchSummaryMatchesPerRunCsv) {
  const auto stats = small_stats();
  const auto targets = write("targets.smi", "CCOc1ccccc1\nCC(C)Cc1ccccc1\nOCCN\n");
  const Result r = run({ "evolve", "--targets-file", targets.string(),
                         "--generations", "2", "--population-size", "8",
                         "--offspring", "30", "--seed", "3", "--stats",
                         stats.string(), "--out-dir", dir_.string(), "--json" });
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = cli::read_json(dir_ / "summary.json");
  ASSERT_EQ(summary.at("runs").size(), 3u);

  // Recompute from the history CSVs alone: improvement = final best j
  // minus the target j recorded in the "# target" line.
  std::vector<double> imp;
  for (int i = 0; i < 3; ++i) {
    std::ifstream csv(dir_ / ("run_00" + std::to_string(i) + ".history.csv"));
    std::string line, target, last;
    std::getline(csv, line);
    std::getline(csv, target);
    while (std::getline(csv, line))
      last = line;
    const double target_j = nlohmann::json::parse(target.substr(9)).at("j");
    std::vector<std::string> cells;
    std::stringstream ss(last);
    for (std::string c; std::getline(ss, c, ',');)
      cells.push_back(c);
    imp.push_back(std::stod(cells.at(6)) - target_j);
  }
  double mean = (imp[0] + imp[1] + imp[2]) / 3;
  double var = 0;
  for (double v: imp)
    var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / 2);
  EXPECT_NEAR(summary.at("mean_improvement").get<double>(), mean, 1e-9);
  EXPECT_NEAR(summary.at("std_improvement").get<double>(), sd, 1e-9);
  EXPECT_EQ(summary.at("success_rate").get<double>(), 1.0);
  EXPECT_TRUE(fs::exists(dir_ / "summary.csv"));
}

TEST_F(Cli, HistogramBinsAndSeries) {
  auto make = [&](const std::string &name, double delta, double improvement) {
    RunHistory h;
    h.config.delta = delta;
    h.target_smiles = "CCO";
    h.target_j = -2.0;
    h.improvement = improvement;
    h.final_population = { { "CCCO", 0.0, 0.7, -2.0 + improvement } };
    GenerationRecord g;
    g.best_smiles = "CCO";
    h.generations = { g };
    cli::write_json(to_json(h), dir_ / name);
    return (dir_ / name).string();
  };
  const auto a = make("a.json", 0.4, 3.2);
  const auto out = dir_ / "one.json";
  ASSERT_EQ(run({ "histogram", a, "--out", out.string(), "--bin-width", "1" }).code,
            0);
  const auto doc = cli::read_json(out);
  ASSERT_EQ(doc.at("series").size(), 1u);
  const auto &bins = doc.at("series")[0].at("improvement");
  ASSERT_EQ(bins.size(), 1u);
  EXPECT_EQ(bins[0].at("lo"), 3.0);
  EXPECT_EQ(bins[0].at("hi"), 4.0);
  EXPECT_EQ(bins[0].at("count"), 1);

  const auto b = make("b.json", 0.6, 1.5);
  const auto csv = dir_ / "two.csv";
  ASSERT_EQ(run({ "histogram", a, b, "--out", csv.string() }).code, 0);
  const std::string text = slurp(csv);
  EXPECT_NE(text.find("delta=0.4,0.4,improvement,3,4,1"), std::string::npos)
      << text;
  EXPECT_NE(text.find("delta=0.6,0.6,improvement,1,2,1"), std::string::npos);
  EXPECT_EQ(text.rfind("# config ", 0), 0u);

  EXPECT_EQ(run({ "histogram", "--out", csv.string() }).code, 2);
  EXPECT_EQ(run({ "histogram", a, "--out", csv.string(), "--bin-width", "0" }).code,
            2);
  EXPECT_EQ(run({ "histogram", (dir_ / "none.json").string(), "--out",
                  csv.string() })
                .code,
            1);
}

TEST_F(Cli, LowestWritesTargets) {
  const auto stats = small_stats();
  const auto out = dir_ / "low.smi";
  ASSERT_EQ(run({ "lowest", "--dataset", (dir_ / "small.smi").string(),
                  "--stats", stats.string(), "--count", "5", "--out",
                  out.string() })
                .code,
            0);
  const auto picked = test::read_smiles(out.string());
  ASSERT_EQ(picked.size(), 5u);
}

}  // namespace
}  // namespace cga
