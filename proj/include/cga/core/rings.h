#pragma once

#include <vector>

#include "cga/core/molecule.h"

namespace cga {

// Recomputes the SSSR ring set. Deterministic for a given atom numbering.
RingInfo perceive_rings(const Molecule &mol);

// Cyclomatic number |E| - |V| + 1 of a connected molecule, 0 when empty.
int cyclomatic_number(const Molecule &mol);

namespace internal {

// SSSR over an adjacency list. Rings are listed as atom cycles starting at
// their smallest atom index; bond_in_ring is filled per bond.
RingInfo find_sssr(const std::vector<std::vector<Neighbor>> &adj,
                   int num_bonds, std::vector<std::uint8_t> &bond_in_ring);

}  // namespace internal
}  // namespace cga
