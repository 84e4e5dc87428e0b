#pragma once

#include <span>
#include <vector>

#include "cga/core/molecule.h"

namespace cga {

// Canonical atom ranks, a permutation of 0..n-1. Isomorphic molecules receive
// ranks that induce the same canonical traversal.
std::vector<int> canonical_ranks(const Molecule &mol);

// Depth-first spanning tree used by the string writers.
struct Traversal {
  std::vector<int> order;                    // preorder
  std::vector<int> parent_bond;              // -1 for the root
  std::vector<std::vector<int>> children;    // last child continues the chain
  std::vector<std::vector<int>> ring_bonds;  // ring-closure bonds per atom
};

// DFS from the lowest ranked atom, visiting neighbours in rank order.
Traversal canonical_traversal(const Molecule &mol, std::span<const int> ranks);

}  // namespace cga
