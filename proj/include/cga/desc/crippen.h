#pragma once

#include <string_view>
#include <vector>

#include "cga/core/molecule.h"

namespace cga {

struct AtomContribution {
  std::string_view type;  // e.g. "C18"; hydrogens are folded into their atom
  double heavy = 0.0;
  double hydrogens = 0.0;  // summed over the atom's hydrogens
};

// Wildman-Crippen atom typing. Types are tried in table order and the first
// match wins; the element-level catch-all types ("CS", "NS", ...) serve as
// the fallback for atoms no specific rule describes.
std::vector<AtomContribution> crippen_contributions(const Molecule &mol);

// Sum of all atom and hydrogen contributions. Empty molecule -> 0.
double crippen_logp(const Molecule &mol);

}  // namespace cga
