#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cga/core/molecule.h"

namespace cga {

enum class SmilesErrorKind {
  kSyntax,
  kValence,
  kUnclosedRing,
  kUnsupported,
  kKekulize,
};

// Parse failure. offset() is a character offset into the input string.
class SmilesError: public std::runtime_error {
public:
  SmilesError(SmilesErrorKind kind, std::size_t offset, const std::string &msg)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)),
        kind_(kind), offset_(offset) { }

  SmilesErrorKind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

private:
  SmilesErrorKind kind_;
  std::size_t offset_;
};

/**
 * Parses a SMILES string into a sanitized Molecule.
 *
 * Supported: organic-subset atoms, bracket atoms (element, H count, charge),
 * bonds - = # :, branches, ring closures (digits and %nn) and lowercase
 * aromatic atoms. Stereo markers, isotopes, wildcards, atom classes and
 * multi-fragment input raise SmilesErrorKind::kUnsupported. Explicit [H]
 * atoms bonded to a heavy atom are folded into its hydrogen count.
 */
Molecule parse_smiles(std::string_view smiles);

// Canonical SMILES with lowercase aromatic atoms. Empty molecule -> "".
std::string write_smiles(const Molecule &mol);

// Character count of the canonical SMILES.
std::size_t smiles_length(const Molecule &mol);

}  // namespace cga
