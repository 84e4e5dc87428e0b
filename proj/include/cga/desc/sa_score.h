#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>

#include "cga/core/molecule.h"

namespace cga {

// Circular environments (radius 0..kFragmentRadius) are the fragments whose
// dataset frequency drives the rarity term.
inline constexpr int kFragmentRadius = 2;

class FragmentTable {
public:
  // Counts every atom environment of mol, with multiplicity.
  void add(const Molecule &mol);

  static FragmentTable build(std::span<const Molecule> mols);

  std::uint64_t count(std::uint64_t id) const;
  std::uint64_t total() const { return total_; }
  std::size_t size() const { return counts_.size(); }
  bool empty() const { return total_ == 0; }

  // Tab-separated "hex id<TAB>count" lines, sorted by id.
  void save(std::ostream &out) const;
  // Throws std::runtime_error on malformed input.
  static FragmentTable load(std::istream &in);

  bool operator==(const FragmentTable &) const = default;

private:
  std::unordered_map<std::uint64_t, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

struct SaBreakdown {
  double rarity = 0.0;
  double complexity = 0.0;
  double total = 0.0;
};

/**
 * Synthetic-accessibility proxy; higher is harder.
 *
 * rarity     = -(1/n) * sum log2(freq(env) / total) over the n environments
 *              of the molecule (environments absent from the table count
 *              as frequency 1).
 * complexity = 0.5 * (ring pairs sharing a bond)
 *              + 1.0 * (any ring larger than 8)
 *              + 0.05 * max(0, heavy atoms - 30).
 *
 * With an empty table the rarity term is zero.
 */
SaBreakdown sa_breakdown(const Molecule &mol, const FragmentTable &table);

double sa_score(const Molecule &mol, const FragmentTable &table);

// Number of ring pairs in the ring set that share at least one bond.
int fused_ring_pairs(const Molecule &mol);

}  // namespace cga
