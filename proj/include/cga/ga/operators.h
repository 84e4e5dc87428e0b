#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cga/core/molecule.h"
#include "cga/util/random.h"

namespace cga {

enum class CutMode { kNonRing, kRing };

struct CrossoverResult {
  std::vector<Molecule> children;  // 0..4 survivors
  std::optional<CutMode> mode;     // unset when neither parent pair can be cut
};

// Bonds a non-ring cut may sever: single, non-aromatic, outside every ring.
std::vector<int> acyclic_single_bonds(const Molecule &mol);

// Pairs of bonds of one ring whose removal splits the molecule in two.
std::vector<std::pair<int, int>> ring_cut_pairs(const Molecule &mol);

/**
 * Graph crossover. Draws ring or non-ring cutting with equal probability
 * (falling back to the other mode once if a parent cannot be cut that way),
 * severs each parent into two fragments and joins the four cross-parent
 * fragment pairs. Ring fragments have two open sites and are joined in a
 * random orientation; aromatic sites are rejoined aromatically when the
 * result can be kekulized. Children that fail to build or whose canonical
 * SMILES exceeds max_smiles_len are dropped.
 */
CrossoverResult crossover(const Molecule &p1, const Molecule &p2, Rng &rng,
                          std::size_t max_smiles_len);

// Same, with the cut mode fixed and no fallback.
CrossoverResult crossover_with(CutMode mode, const Molecule &p1,
                               const Molecule &p2, Rng &rng,
                               std::size_t max_smiles_len);

// Cuts p1 at cuts1 and p2 at cuts2 (one bond each, or two bonds of one
// ring each) and joins the four cross-parent fragment pairs. The cuts must
// split each parent in two.
std::vector<Molecule> crossover_at(const Molecule &p1, std::span<const int> cuts1,
                                   const Molecule &p2, std::span<const int> cuts2,
                                   Rng &rng, std::size_t max_smiles_len);

}  // namespace cga
