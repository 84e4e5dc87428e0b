#include "cga/ga/history.h"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cga {
namespace {

using nlohmann::json;

json counters_json(const OperatorCounters &c) {
  return {
    { "offspring", c.offspring },
    { "crossover_attempts", c.crossover_attempts },
    { "crossover_ring", c.crossover_ring },
    { "crossover_non_ring", c.crossover_non_ring },
    { "crossover_children", c.crossover_children },
    { "crossover_failures", c.crossover_failures },
    { "mutation_attempts", c.mutation_attempts },
    { "mutation_failures", c.mutation_failures },
  };
}

OperatorCounters counters_from(const json &j) {
  OperatorCounters c;
  c.offspring = j.value("offspring", std::uint64_t { 0 });
  c.crossover_attempts = j.value("crossover_attempts", std::uint64_t { 0 });
  c.crossover_ring = j.value("crossover_ring", std::uint64_t { 0 });
  c.crossover_non_ring = j.value("crossover_non_ring", std::uint64_t { 0 });
  c.crossover_children = j.value("crossover_children", std::uint64_t { 0 });
  c.crossover_failures = j.value("crossover_failures", std::uint64_t { 0 });
  c.mutation_attempts = j.value("mutation_attempts", std::uint64_t { 0 });
  c.mutation_failures = j.value("mutation_failures", std::uint64_t { 0 });
  return c;
}

// JSON has no infinity; an infinite steepness is written as a string.
json steepness_json(double k) {
  if (std::isinf(k))
    return "inf";
  return k;
}

double steepness_from(const json &j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf")
      return INFINITY;
    throw ConfigError("bad logistic steepness");
  }
  return j.get<double>();
}

Phase phase_from(const std::string &s) {
  if (s == "constraint")
    return Phase::kConstraint;
  if (s == "bi-objective")
    return Phase::kBiObjective;
  throw std::runtime_error("unknown phase '" + s + "'");
}

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c: s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

json to_json(const GAConfig &c) {
  return {
    { "population_size", c.population_size },
    { "offspring_per_generation", c.offspring_per_generation },
    { "crossover_prob", c.crossover_prob },
    { "mutation_prob", c.mutation_prob },
    { "delta", c.delta },
    { "generations", c.generations },
    { "max_smiles_len", c.max_smiles_len },
    { "max_smiles_len_applies_to", "canonical" },
    { "seed", c.seed },
    { "terminal_fraction", c.terminal_fraction },
    { "terminal_side", "tail" },
    { "logistic_steepness", steepness_json(c.logistic_steepness) },
    { "logistic_midpoint", c.logistic_midpoint },
    { "fingerprint_radius", c.fp_radius },
    { "fingerprint_bits", c.fp_bits },
    { "threads", c.threads },
  };
}

GAConfig config_from_json(const json &doc) {
  GAConfig c;
  try {
    c.population_size = doc.value("population_size", c.population_size);
    c.offspring_per_generation =
        doc.value("offspring_per_generation", c.offspring_per_generation);
    c.crossover_prob = doc.value("crossover_prob", c.crossover_prob);
    c.mutation_prob = doc.value("mutation_prob", c.mutation_prob);
    c.delta = doc.value("delta", c.delta);
    c.generations = doc.value("generations", c.generations);
    c.max_smiles_len = doc.value("max_smiles_len", c.max_smiles_len);
    c.seed = doc.value("seed", c.seed);
    c.terminal_fraction = doc.value("terminal_fraction", c.terminal_fraction);
    if (doc.contains("logistic_steepness"))
      c.logistic_steepness = steepness_from(doc.at("logistic_steepness"));
    c.logistic_midpoint = doc.value("logistic_midpoint", c.logistic_midpoint);
    c.fp_radius = doc.value("fingerprint_radius", c.fp_radius);
    c.fp_bits = doc.value("fingerprint_bits", c.fp_bits);
    c.threads = doc.value("threads", c.threads);
  } catch (const json::exception &e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const RunHistory &h) {
  json gens = json::array();
  for (const auto &g: h.generations) {
    gens.push_back({
        { "generation", g.generation },
        { "phase", std::string(to_string(g.phase)) },
        { "best_fitness", g.best_fitness },
        { "mean_fitness", g.mean_fitness },
        { "best_smiles", g.best_smiles },
        { "best_similarity", g.best_similarity },
        { "best_j", g.best_j ? json(*g.best_j) : json(nullptr) },
        { "feasible_fraction", g.feasible_fraction },
        { "counters", counters_json(g.counters) },
    });
  }
  json members = json::array();
  for (const auto &m: h.final_population) {
    members.push_back({ { "smiles", m.smiles },
                        { "fitness", m.fitness },
                        { "similarity", m.similarity },
                        { "j", m.j } });
  }
  return {
    { "config", to_json(h.config) },
    { "target", h.target_smiles },
    { "target_j", h.target_j },
    { "improvement", h.improvement },
    { "generations", gens },
    { "final_population", members },
  };
}

RunHistory history_from_json(const json &doc) {
  try {
    RunHistory h;
    h.config = config_from_json(doc.at("config"));
    h.target_smiles = doc.at("target").get<std::string>();
    h.target_j = doc.at("target_j").get<double>();
    h.improvement = doc.at("improvement").get<double>();
    for (const auto &g: doc.at("generations")) {
      GenerationRecord r;
      r.generation = g.at("generation").get<int>();
      r.phase = phase_from(g.at("phase").get<std::string>());
      r.best_fitness = g.at("best_fitness").get<double>();
      r.mean_fitness = g.at("mean_fitness").get<double>();
      r.best_smiles = g.at("best_smiles").get<std::string>();
      r.best_similarity = g.at("best_similarity").get<double>();
      if (!g.at("best_j").is_null())
        r.best_j = g.at("best_j").get<double>();
      r.feasible_fraction = g.at("feasible_fraction").get<double>();
      r.counters = counters_from(g.value("counters", json::object()));
      h.generations.push_back(std::move(r));
    }
    for (const auto &m: doc.at("final_population")) {
      h.final_population.push_back({ m.at("smiles").get<std::string>(),
                                     m.at("fitness").get<double>(),
                                     m.at("similarity").get<double>(),
                                     m.at("j").get<double>() });
    }
    return h;
  } catch (const json::exception &e) {
    throw std::runtime_error(std::string("malformed run history: ") + e.what());
  }
}

void write_history_csv(const RunHistory &h, std::ostream &out) {
  out << "# config " << to_json(h.config).dump() << '\n';
  out << "# target "
      << json { { "smiles", h.target_smiles },
                { "j", h.target_j },
                { "improvement", h.improvement } }
             .dump()
      << '\n';
  out << "generation,phase,best_fitness,mean_fitness,best_smiles,"
         "best_similarity,best_j,feasible_fraction,offspring,"
         "crossover_attempts,crossover_ring,crossover_non_ring,"
         "crossover_children,crossover_failures,mutation_attempts,"
         "mutation_failures\n";
  for (const auto &g: h.generations) {
    const auto &c = g.counters;
    out << g.generation << ',' << to_string(g.phase) << ','
        << format_double(g.best_fitness) << ','
        << format_double(g.mean_fitness) << ',' << csv_field(g.best_smiles)
        << ',' << format_double(g.best_similarity) << ','
        << (g.best_j ? format_double(*g.best_j) : std::string()) << ','
        << format_double(g.feasible_fraction) << ',' << c.offspring << ','
        << c.crossover_attempts << ',' << c.crossover_ring << ','
        << c.crossover_non_ring << ',' << c.crossover_children << ','
        << c.crossover_failures << ',' << c.mutation_attempts << ','
        << c.mutation_failures << '\n';
  }
}

}  // namespace cga
