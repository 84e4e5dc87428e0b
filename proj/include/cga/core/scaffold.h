#pragma once

#include <span>

#include "cga/core/molecule.h"

namespace cga {

// Ring systems plus the linkers between them. Non-ring atoms of degree one
// are pruned repeatedly, then terminal atoms double-bonded to what remains
// are put back (ring carbonyls). Acyclic molecules give an empty scaffold.
Molecule murcko_scaffold(const Molecule &mol);

// Subgraph isomorphism of needle into haystack, matching element,
// aromaticity and bond type. Hydrogen counts are not compared.
bool substructure_contains(const Molecule &haystack, const Molecule &needle);

// Full graph isomorphism also comparing charges and hydrogen counts.
bool isomorphic(const Molecule &a, const Molecule &b);

// Same molecule with atom i moved to position new_index[i].
Molecule renumber_atoms(const Molecule &mol, std::span<const int> new_index);

}  // namespace cga
