#include "cga/ga/engine.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <thread>
#include <unordered_set>

#include "cga/fmt/smiles.h"
#include "cga/ga/operators.h"

namespace cga {
namespace {

// Stream id for the replacement step; offspring use ids below 2^32.
constexpr std::uint64_t kReplaceStream = std::uint64_t { 1 } << 40;

// Strict "better than": higher fitness, then lexicographically smaller
// SMILES. Equal keys compare equal and are ordered by the caller.
bool better(const Individual &a, const Individual &b) {
  if (a.fitness != b.fitness)
    return a.fitness > b.fitness;
  return a.smiles < b.smiles;
}

void require(bool ok, const char *what) {
  if (!ok)
    throw ConfigError(what);
}

Individual make_one(const Population &pop, const Problem &problem,
                    const GAConfig &cfg, std::uint64_t generation,
                    std::uint64_t index, OperatorCounters &counters) {
  Rng rng(derive_seed(cfg.seed, generation, index));
  const auto &members = pop.members;
  const Individual &p1 = members[uniform_index(rng, members.size())];
  const Individual &p2 = members[uniform_index(rng, members.size())];
  const auto max_len = static_cast<std::size_t>(cfg.max_smiles_len);

  ++counters.offspring;
  Molecule child;
  bool have_child = false;
  if (bernoulli(rng, cfg.crossover_prob)) {
    ++counters.crossover_attempts;
    CrossoverResult r = crossover(p1.mol, p2.mol, rng, max_len);
    if (r.mode == CutMode::kRing)
      ++counters.crossover_ring;
    else if (r.mode == CutMode::kNonRing)
      ++counters.crossover_non_ring;
    counters.crossover_children += r.children.size();
    if (!r.children.empty()) {
      child = std::move(r.children[uniform_index(rng, r.children.size())]);
      have_child = true;
    } else {
      ++counters.crossover_failures;
    }
  }
  if (!have_child)
    child = (bernoulli(rng, 0.5) ? p1 : p2).mol;

  if (bernoulli(rng, cfg.mutation_prob)) {
    ++counters.mutation_attempts;
    bool ok = false;
    try {
      const TokenSequence tokens = encode(child);
      Mutation m = mutate(tokens, rng, problem.model->alphabet,
                          cfg.terminal_fraction);
      Molecule mutated = decode(m.tokens);
      if (!mutated.empty() && smiles_length(mutated) <= max_len) {
        child = std::move(mutated);
        ok = true;
      }
    } catch (const SelfiesError &) {
      // Too large for the ring/branch offset alphabet; keep the child.
    }
    if (!ok)
      ++counters.mutation_failures;
  }
  return evaluate(child, problem, cfg, pop.phase);
}

GenerationRecord snapshot(const Population &pop, const OperatorCounters &c) {
  GenerationRecord rec;
  rec.generation = pop.generation;
  rec.phase = pop.phase;
  rec.counters = c;
  const Individual &best = pop.members[best_index(pop)];
  rec.best_fitness = best.fitness;
  rec.best_smiles = best.smiles;
  rec.best_similarity = best.similarity;
  rec.best_j = best.j;
  double sum = 0.0;
  int feasible = 0;
  for (const auto &m: pop.members) {
    sum += m.fitness;
    feasible += m.feasible ? 1 : 0;
  }
  const double n = static_cast<double>(pop.members.size());
  rec.mean_fitness = sum / n;
  rec.feasible_fraction = feasible / n;
  return rec;
}

}  // namespace

void GAConfig::validate() const {
  require(population_size > 0, "population size must be positive");
  require(offspring_per_generation > 0, "offspring count must be positive");
  require(crossover_prob >= 0.0 && crossover_prob <= 1.0,
          "crossover probability must lie in [0, 1]");
  require(mutation_prob >= 0.0 && mutation_prob <= 1.0,
          "mutation probability must lie in [0, 1]");
  require(delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]");
  require(generations >= 0, "generations must be non-negative");
  require(max_smiles_len > 0, "maximum SMILES length must be positive");
  require(terminal_fraction > 0.0 && terminal_fraction <= 1.0,
          "terminal fraction must lie in (0, 1]");
  require(logistic_steepness >= 0.0, "logistic steepness must be >= 0");
  require(logistic_midpoint >= 0.0 && logistic_midpoint <= 1.0,
          "logistic midpoint must lie in [0, 1]");
  require(fp_radius >= 0, "fingerprint radius must be non-negative");
  require(fp_bits >= 64 && std::has_single_bit(static_cast<unsigned>(fp_bits)),
          "fingerprint width must be a power of two >= 64");
  require(threads >= 1, "thread count must be positive");
}

std::string_view to_string(Phase phase) {
  return phase == Phase::kConstraint ? "constraint" : "bi-objective";
}

Dataset Dataset::from(std::vector<Molecule> mols, int fp_radius, int fp_bits) {
  Dataset d;
  d.mols = std::move(mols);
  for (const Molecule &m: d.mols) {
    d.smiles.push_back(write_smiles(m));
    d.fps.push_back(circular_fingerprint(m, fp_radius, fp_bits));
  }
  return d;
}

Problem::Problem(const Molecule &target_, const ScoringModel &model_,
                 const GAConfig &cfg)
    : target(target_),
      target_fp(circular_fingerprint(target_, cfg.fp_radius, cfg.fp_bits)),
      target_j(penalized_logp(target_, model_.stats, model_.fragments).j),
      model(&model_) { }

double similarity_penalty(double similarity, double delta) {
  return similarity >= delta ? 0.0 : kDeathPenalty;
}

double similarity_penalty(const Molecule &mol, const Molecule &target,
                          double delta, int fp_radius, int fp_bits) {
  const double sim = tanimoto(circular_fingerprint(mol, fp_radius, fp_bits),
                              circular_fingerprint(target, fp_radius, fp_bits));
  return similarity_penalty(sim, delta);
}

double fitness(const Individual &ind, Phase phase, double delta) {
  const double penalty = similarity_penalty(ind.similarity, delta);
  if (phase == Phase::kConstraint)
    return penalty;
  return ind.j.value() + penalty;
}

Individual evaluate(const Molecule &mol, const Problem &problem,
                    const GAConfig &cfg, Phase phase) {
  Individual ind;
  ind.mol = mol;
  ind.smiles = write_smiles(mol);
  ind.similarity = tanimoto(circular_fingerprint(mol, cfg.fp_radius,
                                                 cfg.fp_bits),
                            problem.target_fp);
  ind.feasible = ind.similarity >= cfg.delta;
  if (phase == Phase::kBiObjective)
    ind.j = penalized_logp(mol, problem.model->stats,
                           problem.model->fragments).j;
  ind.fitness = fitness(ind, phase, cfg.delta);
  return ind;
}

Population init_population(const Problem &problem, const Dataset *dataset,
                           const GAConfig &cfg) {
  Population pop;
  const auto size = static_cast<std::size_t>(cfg.population_size);
  if (dataset) {
    struct Candidate {
      double sim;
      std::size_t index;
    };
    std::vector<Candidate> picks;
    for (std::size_t i = 0; i < dataset->mols.size(); ++i) {
      if (dataset->fps[i].nbits() != problem.target_fp.nbits()
          || dataset->fps[i].radius() != problem.target_fp.radius())
        throw ConfigError("dataset fingerprints do not match the configuration");
      const double sim = tanimoto(dataset->fps[i], problem.target_fp);
      if (sim >= cfg.delta
          && dataset->smiles[i].size() <= static_cast<std::size_t>(
                 cfg.max_smiles_len))
        picks.push_back({ sim, i });
    }
    std::sort(picks.begin(), picks.end(),
              [&](const Candidate &a, const Candidate &b) {
                if (a.sim != b.sim)
                  return a.sim > b.sim;
                return dataset->smiles[a.index] < dataset->smiles[b.index];
              });
    std::unordered_set<std::string> seen;
    for (const auto &c: picks) {
      if (pop.members.size() == size)
        break;
      if (!seen.insert(dataset->smiles[c.index]).second)
        continue;
      pop.members.push_back(evaluate(dataset->mols[c.index], problem, cfg,
                                     pop.phase));
    }
  }
  if (pop.members.size() < size) {
    const Individual copy = evaluate(problem.target, problem, cfg, pop.phase);
    pop.members.resize(size, copy);
  }
  return pop;
}

OperatorCounters &OperatorCounters::operator+=(const OperatorCounters &o) {
  offspring += o.offspring;
  crossover_attempts += o.crossover_attempts;
  crossover_ring += o.crossover_ring;
  crossover_non_ring += o.crossover_non_ring;
  crossover_children += o.crossover_children;
  crossover_failures += o.crossover_failures;
  mutation_attempts += o.mutation_attempts;
  mutation_failures += o.mutation_failures;
  return *this;
}

std::vector<Individual> make_offspring(const Population &pop,
                                       const Problem &problem,
                                       const GAConfig &cfg,
                                       OperatorCounters *counters) {
  const auto count = static_cast<std::size_t>(cfg.offspring_per_generation);
  const std::uint64_t generation = static_cast<std::uint64_t>(pop.generation) + 1;
  std::vector<Individual> out(count);
  const auto threads = static_cast<std::size_t>(
      std::min<int>(cfg.threads, cfg.offspring_per_generation));
  std::vector<OperatorCounters> local(threads);

  auto work = [&](std::size_t t) {
    for (std::size_t i = t; i < count; i += threads)
      out[i] = make_one(pop, problem, cfg, generation, i, local[t]);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back(work, t);
    for (auto &th: pool)
      th.join();
  }
  if (counters)
    for (const auto &c: local)
      *counters += c;
  return out;
}

double survival_probability(int rank, int population_size, double steepness,
                            double midpoint) {
  const double x = static_cast<double>(rank) / population_size - midpoint;
  if (std::isinf(steepness))
    return x < 0 ? 1.0 : (x > 0 ? 0.0 : 0.5);
  return 1.0 / (1.0 + std::exp(steepness * x));
}

Population replace(const Population &pop, std::span<const Individual> offspring,
                   const GAConfig &cfg, Rng &rng) {
  const auto &members = pop.members;
  const int n = static_cast<int>(members.size());

  std::unordered_set<std::string> seen;
  for (const auto &m: members)
    seen.insert(m.smiles);
  std::vector<const Individual *> fresh;
  for (const auto &o: offspring) {
    if (pop.phase == Phase::kBiObjective && !o.feasible)
      continue;
    if (seen.insert(o.smiles).second)
      fresh.push_back(&o);
  }

  // Pool order: by fitness and SMILES; members precede equal offspring and
  // keep their index order.
  struct Entry {
    const Individual *ind;
    int member;  // index into members, -1 for offspring
  };
  std::vector<Entry> pool;
  for (int i = 0; i < n; ++i)
    pool.push_back({ &members[i], i });
  for (const Individual *o: fresh)
    pool.push_back({ o, -1 });
  std::stable_sort(pool.begin(), pool.end(), [](const Entry &a, const Entry &b) {
    if (better(*a.ind, *b.ind))
      return true;
    if (better(*b.ind, *a.ind))
      return false;
    return a.member >= 0 && b.member < 0;
  });

  std::vector<int> rank(n);
  std::vector<const Individual *> ranked_offspring;
  for (int r = 0; r < static_cast<int>(pool.size()); ++r) {
    if (pool[r].member >= 0)
      rank[pool[r].member] = r;
    else
      ranked_offspring.push_back(pool[r].ind);
  }

  std::vector<std::uint8_t> survive(n);
  for (int i = 0; i < n; ++i)
    survive[i] = bernoulli(rng, survival_probability(rank[i], n,
                                                     cfg.logistic_steepness,
                                                     cfg.logistic_midpoint));
  if (pool.front().member >= 0)
    survive[pool.front().member] = 1;

  Population next;
  next.phase = pop.phase;
  next.generation = pop.generation + 1;
  next.members = members;
  std::size_t used = 0;
  for (int i = 0; i < n; ++i) {
    if (!survive[i] && used < ranked_offspring.size())
      next.members[i] = *ranked_offspring[used++];
  }
  if (pool.front().member < 0 && used == 0) {
    // Elitism: the best offspring displaces the worst ranked member.
    const int worst = static_cast<int>(
        std::max_element(rank.begin(), rank.end()) - rank.begin());
    next.members[worst] = *pool.front().ind;
  }
  return next;
}

Population check_phase_transition(const Population &pop, const Problem &problem,
                                  const GAConfig &cfg) {
  if (pop.phase == Phase::kBiObjective)
    return pop;
  const bool any_feasible = std::any_of(pop.members.begin(), pop.members.end(),
                                        [](const Individual &m) {
                                          return m.feasible;
                                        });
  if (!any_feasible)
    return pop;
  Population next = pop;
  next.phase = Phase::kBiObjective;
  for (auto &m: next.members) {
    if (!m.j)
      m.j = penalized_logp(m.mol, problem.model->stats,
                           problem.model->fragments).j;
    m.fitness = fitness(m, next.phase, cfg.delta);
  }
  return next;
}

std::size_t best_index(const Population &pop) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.members.size(); ++i)
    if (better(pop.members[i], pop.members[best]))
      best = i;
  return best;
}

RunHistory evolve(const Molecule &target, const Dataset *dataset,
                  const ScoringModel &model, const GAConfig &cfg) {
  cfg.validate();
  if (target.empty())
    throw ConfigError("target molecule is empty");
  if (smiles_length(target) > static_cast<std::size_t>(cfg.max_smiles_len))
    throw ConfigError("target SMILES is longer than the length cap");
  if (model.alphabet.empty())
    throw ConfigError("mutation alphabet is empty");

  const Problem problem(target, model, cfg);
  RunHistory history;
  history.config = cfg;
  history.target_smiles = write_smiles(target);
  history.target_j = problem.target_j;

  Population pop = init_population(problem, dataset, cfg);
  pop = check_phase_transition(pop, problem, cfg);
  history.generations.push_back(snapshot(pop, {}));

  for (int g = 1; g <= cfg.generations; ++g) {
    OperatorCounters counters;
    const auto offspring = make_offspring(pop, problem, cfg, &counters);
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(g),
                        kReplaceStream));
    pop = replace(pop, offspring, cfg, rng);
    pop = check_phase_transition(pop, problem, cfg);
    history.generations.push_back(snapshot(pop, counters));
  }

  std::vector<const Individual *> order;
  for (auto &m: pop.members)
    order.push_back(&m);
  std::stable_sort(order.begin(), order.end(),
                   [](const Individual *a, const Individual *b) {
                     return better(*a, *b);
                   });
  for (const Individual *m: order) {
    const double j = m->j ? *m->j
                          : penalized_logp(m->mol, model.stats,
                                           model.fragments).j;
    history.final_population.push_back({ m->smiles, m->fitness,
                                         m->similarity, j });
  }
  history.improvement = history.final_population.front().j - history.target_j;
  return history;
}

}  // namespace cga
