#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cga/core/molecule.h"
#include "cga/desc/penalized_logp.h"
#include "cga/desc/sa_score.h"
#include "cga/fmt/selfies.h"
#include "cga/fp/fingerprint.h"
#include "cga/util/random.h"

namespace cga {

inline constexpr double kDeathPenalty = -1e6;

class ConfigError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct GAConfig {
  int population_size = 100;
  int offspring_per_generation = 1000;
  double crossover_prob = 1.0;
  double mutation_prob = 0.5;
  double delta = 0.4;
  int generations = 20;
  int max_smiles_len = 81;
  std::uint64_t seed = 0;
  double terminal_fraction = 0.1;
  double logistic_steepness = 10.0;
  double logistic_midpoint = 0.5;
  int fp_radius = kDefaultRadius;
  int fp_bits = kDefaultBits;
  int threads = 1;  // offspring evaluation only; results do not depend on it

  // Throws ConfigError naming the first invalid field.
  void validate() const;
};

enum class Phase { kConstraint, kBiObjective };

std::string_view to_string(Phase phase);

struct Individual {
  Molecule mol;
  std::string smiles;  // canonical
  double fitness = 0.0;
  double similarity = 0.0;
  std::optional<double> j;  // set once scored under the bi-objective phase
  bool feasible = false;
};

struct Population {
  std::vector<Individual> members;
  Phase phase = Phase::kConstraint;
  int generation = 0;
};

// Everything evaluation needs besides the configuration.
struct ScoringModel {
  ScoreStats stats;
  FragmentTable fragments;
  std::vector<Token> alphabet = default_alphabet();
};

// Candidate pool for population initialization, with cached fingerprints.
struct Dataset {
  std::vector<Molecule> mols;
  std::vector<std::string> smiles;
  std::vector<Fingerprint> fps;

  static Dataset from(std::vector<Molecule> mols, int fp_radius = kDefaultRadius,
                      int fp_bits = kDefaultBits);
};

// Fixed context of one run.
struct Problem {
  Molecule target;
  Fingerprint target_fp;
  double target_j = 0.0;
  const ScoringModel *model = nullptr;

  Problem(const Molecule &target, const ScoringModel &model,
          const GAConfig &cfg);
};

// 0 when tanimoto(fp(mol), fp(target)) >= delta, else the death penalty.
double similarity_penalty(const Molecule &mol, const Molecule &target,
                          double delta, int fp_radius = kDefaultRadius,
                          int fp_bits = kDefaultBits);
double similarity_penalty(double similarity, double delta);

// Constraint phase: the penalty alone. Bi-objective phase: J plus penalty.
// Requires ind.j in the bi-objective phase.
double fitness(const Individual &ind, Phase phase, double delta);

Individual evaluate(const Molecule &mol, const Problem &problem,
                    const GAConfig &cfg, Phase phase);

/**
 * Dataset molecules with similarity >= delta (and within the length cap),
 * most similar first with canonical SMILES breaking ties, truncated to the
 * population size and padded with copies of the target. Without a dataset
 * the population is all target copies.
 */
Population init_population(const Problem &problem, const Dataset *dataset,
                           const GAConfig &cfg);

struct OperatorCounters {
  std::uint64_t offspring = 0;
  std::uint64_t crossover_attempts = 0;
  std::uint64_t crossover_ring = 0;
  std::uint64_t crossover_non_ring = 0;
  std::uint64_t crossover_children = 0;  // survivors over all attempts
  std::uint64_t crossover_failures = 0;  // no child, parent copied instead
  std::uint64_t mutation_attempts = 0;
  std::uint64_t mutation_failures = 0;   // rejected, pre-mutation kept

  OperatorCounters &operator+=(const OperatorCounters &o);
  bool operator==(const OperatorCounters &) const = default;
};

// Builds cfg.offspring_per_generation children. Offspring i draws from its
// own stream seeded by (seed, generation, i), so results are independent of
// the thread count.
std::vector<Individual> make_offspring(const Population &pop,
                                       const Problem &problem,
                                       const GAConfig &cfg,
                                       OperatorCounters *counters = nullptr);

// Survival probability of a member ranked `rank` (0 = best) in the pool.
double survival_probability(int rank, int population_size, double steepness,
                            double midpoint);

/**
 * Logistic rank replacement. Members and offspring are pooled and ranked by
 * fitness (ties by canonical SMILES). Each member survives with
 * survival_probability of its pooled rank; replaced members receive the best
 * unused offspring. Offspring duplicating a member or each other are ignored,
 * and under the bi-objective phase infeasible offspring are discarded. The
 * best pooled individual always ends up in the population.
 */
Population replace(const Population &pop, std::span<const Individual> offspring,
                   const GAConfig &cfg, Rng &rng);

// One-way switch to the bi-objective phase once any member is feasible;
// fitness is recomputed for the new phase.
Population check_phase_transition(const Population &pop, const Problem &problem,
                                  const GAConfig &cfg);

struct GenerationRecord {
  int generation = 0;
  Phase phase = Phase::kConstraint;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  std::string best_smiles;
  double best_similarity = 0.0;
  std::optional<double> best_j;
  double feasible_fraction = 0.0;
  OperatorCounters counters;
};

struct FinalMember {
  std::string smiles;
  double fitness = 0.0;
  double similarity = 0.0;
  double j = 0.0;
};

struct RunHistory {
  GAConfig config;
  std::string target_smiles;
  double target_j = 0.0;
  std::vector<GenerationRecord> generations;
  std::vector<FinalMember> final_population;  // best first
  double improvement = 0.0;  // best final J minus target J
};

// Index of the best member: highest fitness, then smallest SMILES.
std::size_t best_index(const Population &pop);

RunHistory evolve(const Molecule &target, const Dataset *dataset,
                  const ScoringModel &model, const GAConfig &cfg);

}  // namespace cga
