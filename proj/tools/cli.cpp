#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "cga/fmt/smiles.h"
#include "cga/ga/history.h"
#include "cli_io.h"

namespace cga::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Molecule parse_target(const std::string &smiles) {
  try {
    return parse_smiles(smiles);
  } catch (const SmilesError &e) {
    throw UsageError("cannot parse SMILES '" + smiles + "': " + e.what());
  }
}

// Stats come from --stats when given, else are computed from --dataset.
ScoringModel resolve_model(const std::string &stats_path,
                           const std::optional<LoadedDataset> &dataset,
                           std::ostream &err) {
  if (!stats_path.empty())
    return load_model(stats_path);
  if (!dataset)
    throw UsageError("either --stats or --dataset is required");
  err << "computing stats over " << dataset->mols.size() << " molecules of "
      << dataset->path.string() << '\n';
  return build_model(dataset->mols);
}

std::optional<LoadedDataset> maybe_load(const std::string &path,
                                        std::ostream &err) {
  if (path.empty())
    return std::nullopt;
  LoadedDataset d = load_dataset(path);
  if (d.skipped > 0)
    err << "warning: skipped " << d.skipped << " of " << d.total
        << " lines that failed to parse in " << path << '\n';
  return d;
}

json breakdown_json(const std::string &smiles, const ScoreBreakdown &b) {
  return { { "smiles", smiles },         { "logp", b.logp },
           { "sa", b.sa_score },         { "ring_penalty", b.ring_penalty },
           { "z_logp", b.z_logp },       { "z_sa", b.z_sa },
           { "z_ring", b.z_ring },       { "j", b.j } };
}

// ---- stats ---------------------------------------------------------------

struct StatsArgs {
  std::string dataset;
  std::string out;
  std::string ring_mode = "size";
};

int cmd_stats(const StatsArgs &a, std::ostream &out, std::ostream &err) {
  RingPenaltyMode mode;
  try {
    mode = ring_penalty_mode_from_string(a.ring_mode);
  } catch (const std::exception &e) {
    throw UsageError(e.what());
  }
  auto dataset = maybe_load(a.dataset, err);
  const ScoringModel model = build_model(dataset->mols, mode);
  save_model(model, *dataset, a.out);
  out << "parsed " << dataset->mols.size() << " of " << dataset->total
      << " lines (" << dataset->skipped << " skipped); wrote " << a.out
      << '\n';
  return kExitOk;
}

// ---- score ---------------------------------------------------------------

struct ScoreArgs {
  std::string smiles;
  std::string stats;
  std::string dataset;
  bool json = false;
};

int cmd_score(const ScoreArgs &a, std::ostream &out, std::ostream &err) {
  const Molecule mol = parse_target(a.smiles);
  const ScoringModel model = resolve_model(a.stats, maybe_load(a.dataset, err),
                                           err);
  if (model.fragments.empty())
    err << "warning: empty fragment table, every fragment counts as rare\n";
  const ScoreBreakdown b = penalized_logp(mol, model.stats, model.fragments);
  const json doc = breakdown_json(write_smiles(mol), b);
  if (a.json) {
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  out << "smiles        " << write_smiles(mol) << '\n';
  for (const char *key: { "logp", "sa", "ring_penalty", "z_logp", "z_sa",
                          "z_ring", "j" }) {
    std::string label = key;
    label.resize(14, ' ');
    out << label << format_double(doc.at(key).get<double>()) << '\n';
  }
  return kExitOk;
}

// ---- lowest --------------------------------------------------------------

struct LowestArgs {
  std::string dataset;
  std::string stats;
  std::string out;
  int count = 20;
};

int cmd_lowest(const LowestArgs &a, std::ostream &out, std::ostream &err) {
  if (a.count < 1)
    throw UsageError("--count must be positive");
  auto dataset = maybe_load(a.dataset, err);
  const ScoringModel model = resolve_model(a.stats, dataset, err);

  std::vector<std::pair<double, std::string>> scored;
  for (const Molecule &m: dataset->mols)
    scored.emplace_back(penalized_logp(m, model.stats, model.fragments).j,
                        write_smiles(m));
  std::sort(scored.begin(), scored.end());
  scored.erase(std::unique(scored.begin(), scored.end(),
                           [](const auto &x, const auto &y) {
                             return x.second == y.second;
                           }),
               scored.end());
  if (scored.size() > static_cast<std::size_t>(a.count))
    scored.resize(a.count);

  if (fs::path(a.out).has_parent_path())
    fs::create_directories(fs::path(a.out).parent_path());
  std::ofstream file(a.out);
  if (!file)
    throw std::runtime_error("cannot write '" + a.out + "'");
  file << "# lowest-j " << json { { "dataset", a.dataset },
                                  { "count", scored.size() } }.dump()
       << '\n';
  for (const auto &[j, smiles]: scored)
    file << smiles << '\t' << format_double(j) << '\n';
  out << "wrote " << scored.size() << " molecules to " << a.out << '\n';
  return kExitOk;
}

// ---- evolve --------------------------------------------------------------

struct EvolveArgs {
  std::string target;
  std::string targets_file;
  std::string dataset;
  std::string stats;
  std::string out_dir = ".";
  bool json = false;
  GAConfig cfg;
};

struct RunSummary {
  std::size_t index = 0;
  std::string target;
  std::uint64_t seed = 0;
  double target_j = 0.0;
  FinalMember best;
  double improvement = 0.0;
  bool success = false;
};

json summary_json(const RunSummary &r) {
  return { { "index", r.index },
           { "target", r.target },
           { "seed", r.seed },
           { "target_j", r.target_j },
           { "best_smiles", r.best.smiles },
           { "best_j", r.best.j },
           { "best_similarity", r.best.similarity },
           { "improvement", r.improvement },
           { "success", r.success } };
}

RunSummary run_one(std::size_t index, const std::string &prefix,
                   const Molecule &target, const Dataset *pool,
                   const ScoringModel &model, const GAConfig &cfg,
                   const fs::path &out_dir) {
  const RunHistory h = evolve(target, pool, model, cfg);
  write_json(to_json(h), out_dir / (prefix + ".history.json"));
  {
    std::ofstream csv(out_dir / (prefix + ".history.csv"));
    if (!csv)
      throw std::runtime_error("cannot write history CSV in "
                               + out_dir.string());
    write_history_csv(h, csv);
  }
  write_final_population(h, out_dir / (prefix + ".final.tsv"));
  write_json(scaffold_report(h), out_dir / (prefix + ".scaffold.json"));

  RunSummary r;
  r.index = index;
  r.target = h.target_smiles;
  r.seed = cfg.seed;
  r.target_j = h.target_j;
  r.best = h.final_population.front();
  r.improvement = h.improvement;
  r.success = r.best.similarity >= cfg.delta;
  return r;
}

int cmd_evolve(const EvolveArgs &a, std::ostream &out, std::ostream &err) {
  try {
    a.cfg.validate();
  } catch (const ConfigError &e) {
    throw UsageError(e.what());
  }

  std::vector<std::string> targets;
  if (!a.target.empty())
    targets.push_back(a.target);
  else
    targets = read_first_tokens(a.targets_file);
  if (targets.empty())
    throw UsageError("no targets given");
  std::vector<Molecule> mols;
  for (const auto &t: targets)
    mols.push_back(parse_target(t));

  auto dataset = maybe_load(a.dataset, err);
  const ScoringModel model = resolve_model(a.stats, dataset, err);
  if (model.fragments.empty())
    err << "warning: empty fragment table, every fragment counts as rare\n";
  std::optional<Dataset> pool;
  if (dataset)
    pool = Dataset::from(dataset->mols, a.cfg.fp_radius, a.cfg.fp_bits);

  const fs::path out_dir = a.out_dir;
  fs::create_directories(out_dir);
  const bool batch = a.target.empty();

  std::vector<RunSummary> runs;
  for (std::size_t i = 0; i < mols.size(); ++i) {
    GAConfig cfg = a.cfg;
    std::string prefix = "run";
    if (batch) {
      // Independent stream per target, still fully determined by --seed.
      cfg.seed = derive_seed(a.cfg.seed, i, 0);
      char buf[32];
      std::snprintf(buf, sizeof buf, "run_%03zu", i);
      prefix = buf;
    }
    try {
      runs.push_back(run_one(i, prefix, mols[i], pool ? &*pool : nullptr,
                             model, cfg, out_dir));
    } catch (const ConfigError &e) {
      throw UsageError("target '" + targets[i] + "': " + e.what());
    }
    if (batch)
      err << prefix << ": improvement " << fixed(runs.back().improvement, 3)
          << " similarity " << fixed(runs.back().best.similarity, 3) << '\n';
  }

  if (!batch) {
    const json doc = summary_json(runs.front());
    if (a.json) {
      out << doc.dump(2) << '\n';
    } else {
      const auto &r = runs.front();
      out << "target      " << r.target << " (j " << fixed(r.target_j, 3)
          << ")\nbest        " << r.best.smiles << " (j "
          << fixed(r.best.j, 3) << ", similarity "
          << fixed(r.best.similarity, 3) << ")\nimprovement "
          << fixed(r.improvement, 3) << '\n';
    }
    return kExitOk;
  }

  double mean = 0.0;
  for (const auto &r: runs)
    mean += r.improvement;
  mean /= static_cast<double>(runs.size());
  double ss = 0.0;
  for (const auto &r: runs)
    ss += (r.improvement - mean) * (r.improvement - mean);
  const double sd = runs.size() > 1
                        ? std::sqrt(ss / static_cast<double>(runs.size() - 1))
                        : 0.0;
  const auto successes = std::count_if(runs.begin(), runs.end(),
                                       [](const RunSummary &r) {
                                         return r.success;
                                       });
  const double success_rate = static_cast<double>(successes)
                              / static_cast<double>(runs.size());
  const std::string cell = fixed(mean, 2) + "±" + fixed(sd, 2);
  const std::string success_cell = fixed(100.0 * success_rate, 0) + "%";

  json rows = json::array();
  for (const auto &r: runs)
    rows.push_back(summary_json(r));
  const json summary {
    { "config", to_json(a.cfg) },
    { "seed_derivation", "per-target seed = derive_seed(seed, index, 0)" },
    { "targets_file", a.targets_file },
    { "runs", rows },
    { "mean_improvement", mean },
    { "std_improvement", sd },
    { "std_convention", "sample" },
    { "success_rate", success_rate },
    { "improvement_cell", cell },
    { "success_cell", success_cell },
  };
  write_json(summary, out_dir / "summary.json");

  std::ofstream csv(out_dir / "summary.csv");
  csv << "# config " << to_json(a.cfg).dump() << '\n';
  csv << "index,target,seed,target_j,best_smiles,best_j,best_similarity,"
         "improvement,success\n";
  for (const auto &r: runs)
    csv << r.index << ',' << r.target << ',' << r.seed << ','
        << format_double(r.target_j) << ',' << r.best.smiles << ','
        << format_double(r.best.j) << ',' << format_double(r.best.similarity)
        << ',' << format_double(r.improvement) << ',' << (r.success ? 1 : 0)
        << '\n';

  if (a.json) {
    out << summary.dump(2) << '\n';
  } else {
    out << "delta " << format_double(a.cfg.delta) << "  runs " << runs.size()
        << "  improvement " << cell << "  success " << success_cell << '\n';
  }
  return kExitOk;
}

// ---- histogram -----------------------------------------------------------

struct HistogramArgs {
  std::vector<std::string> histories;
  std::string out;
  double bin_width = 1.0;
  bool json = false;
};

struct Series {
  double delta = 0.0;
  std::vector<double> improvement, original, final;
};

json bin_values(const std::vector<double> &values, double width) {
  json bins = json::array();
  if (values.empty())
    return bins;
  std::map<long long, std::size_t> counts;
  for (double v: values)
    ++counts[static_cast<long long>(std::floor(v / width))];
  const long long lo = counts.begin()->first;
  const long long hi = counts.rbegin()->first;
  for (long long b = lo; b <= hi; ++b) {
    const auto it = counts.find(b);
    bins.push_back({ { "lo", static_cast<double>(b) * width },
                     { "hi", static_cast<double>(b + 1) * width },
                     { "count", it == counts.end() ? 0 : it->second } });
  }
  return bins;
}

int cmd_histogram(const HistogramArgs &a, std::ostream &out,
                  std::ostream &) {
  if (!(a.bin_width > 0.0) || !std::isfinite(a.bin_width))
    throw UsageError("--bin-width must be positive");
  std::map<double, Series> series;
  for (const auto &path: a.histories) {
    const RunHistory h = history_from_json(read_json(path));
    Series &s = series[h.config.delta];
    s.delta = h.config.delta;
    s.improvement.push_back(h.improvement);
    s.original.push_back(h.target_j);
    s.final.push_back(h.final_population.front().j);
  }

  json doc_series = json::array();
  for (const auto &[delta, s]: series) {
    double mean = 0.0;
    for (double v: s.improvement)
      mean += v;
    mean /= static_cast<double>(s.improvement.size());
    doc_series.push_back({
        { "label", "delta=" + format_double(delta) },
        { "delta", delta },
        { "runs", s.improvement.size() },
        { "mean_improvement", mean },
        { "improvement", bin_values(s.improvement, a.bin_width) },
        { "original_j", bin_values(s.original, a.bin_width) },
        { "final_j", bin_values(s.final, a.bin_width) },
    });
    out << "delta=" << format_double(delta) << "  runs "
        << s.improvement.size() << "  mean improvement " << fixed(mean, 3)
        << '\n';
  }
  const json config { { "bin_width", a.bin_width },
                      { "inputs", a.histories } };

  const bool as_json = a.json || fs::path(a.out).extension() == ".json";
  if (as_json) {
    write_json({ { "config", config }, { "series", doc_series } }, a.out);
    return kExitOk;
  }
  if (fs::path(a.out).has_parent_path())
    fs::create_directories(fs::path(a.out).parent_path());
  std::ofstream csv(a.out);
  if (!csv)
    throw std::runtime_error("cannot write '" + a.out + "'");
  csv << "# config " << config.dump() << '\n';
  csv << "series,delta,quantity,bin_lo,bin_hi,count\n";
  for (const auto &s: doc_series)
    for (const char *q: { "improvement", "original_j", "final_j" })
      for (const auto &b: s.at(q))
        csv << s.at("label").get<std::string>() << ','
            << format_double(s.at("delta").get<double>()) << ',' << q << ','
            << format_double(b.at("lo").get<double>()) << ','
            << format_double(b.at("hi").get<double>()) << ','
            << b.at("count").get<std::size_t>() << '\n';
  return kExitOk;
}

void add_ga_options(CLI::App *cmd, GAConfig &cfg) {
  cmd->add_option("--delta", cfg.delta, "Tanimoto similarity threshold")
      ->capture_default_str();
  cmd->add_option("--generations", cfg.generations, "Generations after the initial one")->capture_default_str();
  cmd->add_option("--population-size", cfg.population_size, "Members kept per generation")
      ->capture_default_str();
  cmd->add_option("--offspring", cfg.offspring_per_generation,
                  "Offspring per generation")
      ->capture_default_str();
  cmd->add_option("--crossover-prob", cfg.crossover_prob, "Chance an offspring comes from crossover")
      ->capture_default_str();
  cmd->add_option("--mutation-prob", cfg.mutation_prob, "Chance an offspring is then mutated")->capture_default_str();
  cmd->add_option("--max-smiles-len", cfg.max_smiles_len,
                  "Cap on canonical SMILES length")
      ->capture_default_str();
  cmd->add_option("--terminal-fraction", cfg.terminal_fraction,
                  "Trailing share of SELFIES tokens open to mutation")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Seed for all randomness")->capture_default_str();
  cmd->add_option("--logistic-steepness", cfg.logistic_steepness, "Survival curve steepness k (inf = truncation)")
      ->capture_default_str();
  cmd->add_option("--logistic-midpoint", cfg.logistic_midpoint, "Normalized rank where survival is one half")
      ->capture_default_str();
  cmd->add_option("--threads", cfg.threads,
                  "Offspring evaluation threads (results do not depend on it)")
      ->capture_default_str();
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out,
        std::ostream &err) {
  CLI::App app { "Two-phase constrained genetic algorithm for molecular "
                 "inverse design",
                 "cga" };
  app.require_subcommand(1);

  StatsArgs stats_args;
  auto *stats = app.add_subcommand("stats", "Compute normalization stats");
  stats->add_option("--dataset", stats_args.dataset, "SMILES file")
      ->required();
  stats->add_option("--out", stats_args.out, "Stats JSON to write")
      ->required();
  stats->add_option("--ring-mode", stats_args.ring_mode,
                    "Ring penalty reading: size or count")
      ->capture_default_str();

  ScoreArgs score_args;
  auto *score = app.add_subcommand("score", "Penalized logP breakdown");
  score->add_option("smiles", score_args.smiles, "Molecule to score")->required();
  score->add_option("--stats", score_args.stats, "Stats JSON from `cga stats`");
  score->add_option("--dataset", score_args.dataset, "Compute stats from this dataset instead");
  score->add_flag("--json", score_args.json, "Print the breakdown as JSON");

  LowestArgs lowest_args;
  auto *lowest = app.add_subcommand("lowest",
                                    "Write the lowest-J dataset molecules");
  lowest->add_option("--dataset", lowest_args.dataset, "SMILES file to rank")->required();
  lowest->add_option("--stats", lowest_args.stats, "Stats JSON (default: computed from the dataset)");
  lowest->add_option("--count", lowest_args.count, "How many molecules to write")->capture_default_str();
  lowest->add_option("--out", lowest_args.out, "Output file")->required();

  EvolveArgs evolve_args;
  auto *evolve_cmd = app.add_subcommand("evolve", "Run the optimization");
  auto *target_opt = evolve_cmd->add_option("--target", evolve_args.target,
                                            "Target SMILES");
  auto *targets_opt = evolve_cmd->add_option(
      "--targets-file", evolve_args.targets_file, "Batch of targets");
  target_opt->excludes(targets_opt);
  targets_opt->excludes(target_opt);
  evolve_cmd->add_option("--dataset", evolve_args.dataset,
                         "Dataset for stats and population initialization");
  evolve_cmd->add_option("--stats", evolve_args.stats, "Stats JSON (default: computed from --dataset)");
  evolve_cmd->add_option("--out-dir", evolve_args.out_dir, "Directory for run artifacts")
      ->capture_default_str();
  evolve_cmd->add_flag("--json", evolve_args.json, "Print the run summary as JSON");
  add_ga_options(evolve_cmd, evolve_args.cfg);

  HistogramArgs hist_args;
  auto *hist = app.add_subcommand("histogram",
                                  "Bin improvements of run histories");
  hist->add_option("histories", hist_args.histories, "History JSON files")
      ->required();
  hist->add_option("--out", hist_args.out, "CSV, or JSON by extension")
      ->required();
  hist->add_option("--bin-width", hist_args.bin_width, "Width of the histogram bins")->capture_default_str();
  hist->add_flag("--json", hist_args.json, "Write JSON regardless of extension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (stats->parsed())
      return cmd_stats(stats_args, out, err);
    if (score->parsed())
      return cmd_score(score_args, out, err);
    if (lowest->parsed())
      return cmd_lowest(lowest_args, out, err);
    if (evolve_cmd->parsed()) {
      if (evolve_args.target.empty() && evolve_args.targets_file.empty()) {
        err << "error: one of --target or --targets-file is required\n";
        return kExitUsage;
      }
      return cmd_evolve(evolve_args, out, err);
    }
    return cmd_histogram(hist_args, out, err);
  } catch (const UsageError &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace cga::cli
