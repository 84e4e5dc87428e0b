#pragma once

#include <span>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cga/core/molecule.h"
#include "cga/desc/sa_score.h"

namespace cga {

// How the ring penalty reads "large rings": the size of the largest ring
// beyond six, or the number of rings with seven or more atoms.
enum class RingPenaltyMode { kSize, kCount };

std::string_view to_string(RingPenaltyMode mode);
RingPenaltyMode ring_penalty_mode_from_string(std::string_view s);

double ring_penalty(const Molecule &mol,
                    RingPenaltyMode mode = RingPenaltyMode::kSize);

struct RawScores {
  double logp = 0.0;
  double sa = 0.0;
  double ring = 0.0;
};

/**
 * Dataset mean and population standard deviation of each J component.
 *
 * A component with zero variance cannot be z-scored; its std is replaced by
 * 1.0 and the matching *_degenerate flag is set, so that z reduces to a
 * plain difference from the mean.
 */
struct ScoreStats {
  double logp_mean = 0.0;
  double logp_std = 1.0;
  double sa_mean = 0.0;
  double sa_std = 1.0;
  double ring_mean = 0.0;
  double ring_std = 1.0;
  bool logp_degenerate = false;
  bool sa_degenerate = false;
  bool ring_degenerate = false;
  RingPenaltyMode ring_mode = RingPenaltyMode::kSize;
  std::size_t count = 0;

  bool operator==(const ScoreStats &) const = default;
};

struct ScoreBreakdown {
  double logp = 0.0;
  double sa_score = 0.0;
  double ring_penalty = 0.0;
  double z_logp = 0.0;
  double z_sa = 0.0;
  double z_ring = 0.0;
  double j = 0.0;
};

RawScores raw_scores(const Molecule &mol, const FragmentTable &table,
                     RingPenaltyMode mode = RingPenaltyMode::kSize);

// Throws std::invalid_argument for fewer than two samples or when every
// component is constant.
ScoreStats compute_stats(std::span<const RawScores> samples,
                         RingPenaltyMode mode = RingPenaltyMode::kSize);
ScoreStats compute_stats(std::span<const Molecule> mols,
                         const FragmentTable &table,
                         RingPenaltyMode mode = RingPenaltyMode::kSize);

// j = z(logp) - z(sa) - z(ring).
ScoreBreakdown score_raw(const RawScores &raw, const ScoreStats &stats);
ScoreBreakdown penalized_logp(const Molecule &mol, const ScoreStats &stats,
                              const FragmentTable &table);

nlohmann::json to_json(const ScoreStats &stats);
// Throws std::runtime_error on missing fields or invalid values.
ScoreStats stats_from_json(const nlohmann::json &doc);

}  // namespace cga
