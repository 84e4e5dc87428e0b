#include "cga/desc/penalized_logp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cga/desc/crippen.h"

namespace cga {
namespace {

struct Moments {
  double mean = 0.0;
  double std = 1.0;
  bool degenerate = false;
};

// Two-pass mean and population standard deviation.
Moments moments(std::span<const RawScores> samples, double RawScores::*field) {
  Moments m;
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (const auto &s: samples)
    sum += s.*field;
  m.mean = sum / n;
  double sq = 0.0;
  for (const auto &s: samples) {
    const double d = s.*field - m.mean;
    sq += d * d;
  }
  const double std = std::sqrt(sq / n);
  // Relative cutoff guards against rounding noise on constant columns.
  if (!(std > 1e-12 * std::max(1.0, std::abs(m.mean)))) {
    m.degenerate = true;
    m.std = 1.0;
  } else {
    m.std = std;
  }
  return m;
}

}  // namespace

std::string_view to_string(RingPenaltyMode mode) {
  return mode == RingPenaltyMode::kSize ? "size" : "count";
}

RingPenaltyMode ring_penalty_mode_from_string(std::string_view s) {
  if (s == "size")
    return RingPenaltyMode::kSize;
  if (s == "count")
    return RingPenaltyMode::kCount;
  throw std::invalid_argument("unknown ring penalty mode '" + std::string(s)
                              + "'");
}

double ring_penalty(const Molecule &mol, RingPenaltyMode mode) {
  const RingInfo &info = mol.ring_info();
  if (mode == RingPenaltyMode::kSize)
    return std::max(0, info.largest_ring_size - 6);
  return static_cast<double>(std::count_if(
      info.rings.begin(), info.rings.end(),
      [](const std::vector<int> &r) { return r.size() >= 7; }));
}

RawScores raw_scores(const Molecule &mol, const FragmentTable &table,
                     RingPenaltyMode mode) {
  return { crippen_logp(mol), sa_score(mol, table), ring_penalty(mol, mode) };
}

ScoreStats compute_stats(std::span<const RawScores> samples,
                         RingPenaltyMode mode) {
  if (samples.size() < 2)
    throw std::invalid_argument("score statistics need at least two molecules");
  const Moments logp = moments(samples, &RawScores::logp);
  const Moments sa = moments(samples, &RawScores::sa);
  const Moments ring = moments(samples, &RawScores::ring);
  if (logp.degenerate && sa.degenerate && ring.degenerate)
    throw std::invalid_argument("every score component has zero variance");

  ScoreStats st;
  st.logp_mean = logp.mean;
  st.logp_std = logp.std;
  st.logp_degenerate = logp.degenerate;
  st.sa_mean = sa.mean;
  st.sa_std = sa.std;
  st.sa_degenerate = sa.degenerate;
  st.ring_mean = ring.mean;
  st.ring_std = ring.std;
  st.ring_degenerate = ring.degenerate;
  st.ring_mode = mode;
  st.count = samples.size();
  return st;
}

ScoreStats compute_stats(std::span<const Molecule> mols,
                         const FragmentTable &table, RingPenaltyMode mode) {
  std::vector<RawScores> samples;
  samples.reserve(mols.size());
  for (const Molecule &m: mols)
    samples.push_back(raw_scores(m, table, mode));
  return compute_stats(samples, mode);
}

ScoreBreakdown score_raw(const RawScores &raw, const ScoreStats &stats) {
  ScoreBreakdown b;
  b.logp = raw.logp;
  b.sa_score = raw.sa;
  b.ring_penalty = raw.ring;
  b.z_logp = (raw.logp - stats.logp_mean) / stats.logp_std;
  b.z_sa = (raw.sa - stats.sa_mean) / stats.sa_std;
  b.z_ring = (raw.ring - stats.ring_mean) / stats.ring_std;
  b.j = b.z_logp - b.z_sa - b.z_ring;
  return b;
}

ScoreBreakdown penalized_logp(const Molecule &mol, const ScoreStats &stats,
                              const FragmentTable &table) {
  return score_raw(raw_scores(mol, table, stats.ring_mode), stats);
}

nlohmann::json to_json(const ScoreStats &st) {
  auto component = [](double mean, double std, bool degenerate) {
    return nlohmann::json {
      { "mean", mean }, { "std", std }, { "degenerate", degenerate }
    };
  };
  return {
    { "logp", component(st.logp_mean, st.logp_std, st.logp_degenerate) },
    { "sa", component(st.sa_mean, st.sa_std, st.sa_degenerate) },
    { "ring", component(st.ring_mean, st.ring_std, st.ring_degenerate) },
    { "ring_penalty_mode", std::string(to_string(st.ring_mode)) },
    { "std_convention", "population" },
    { "count", st.count },
  };
}

ScoreStats stats_from_json(const nlohmann::json &doc) {
  try {
    ScoreStats st;
    auto read = [&](const char *key, double &mean, double &std, bool &deg) {
      const auto &c = doc.at(key);
      mean = c.at("mean").get<double>();
      std = c.at("std").get<double>();
      deg = c.value("degenerate", false);
      if (!(std > 0.0) || !std::isfinite(mean))
        throw std::runtime_error(std::string("invalid ") + key + " statistics");
    };
    read("logp", st.logp_mean, st.logp_std, st.logp_degenerate);
    read("sa", st.sa_mean, st.sa_std, st.sa_degenerate);
    read("ring", st.ring_mean, st.ring_std, st.ring_degenerate);
    st.ring_mode = ring_penalty_mode_from_string(
        doc.value("ring_penalty_mode", std::string("size")));
    st.count = doc.value("count", std::size_t { 0 });
    return st;
  } catch (const nlohmann::json::exception &e) {
    throw std::runtime_error(std::string("malformed stats document: ")
                             + e.what());
  } catch (const std::invalid_argument &e) {
    throw std::runtime_error(e.what());
  }
}

}  // namespace cga
