#pragma once

#include <cstdint>
#include <vector>

#include "cga/core/molecule.h"

namespace cga {

// Fixed-width bit set produced by circular hashing.
class Fingerprint {
public:
  Fingerprint() = default;
  explicit Fingerprint(int nbits, int radius = 0)
      : words_((nbits + 63) / 64, 0), nbits_(nbits), radius_(radius) { }

  int nbits() const { return nbits_; }
  int radius() const { return radius_; }

  void set(int bit) { words_[bit >> 6] |= std::uint64_t { 1 } << (bit & 63); }
  bool test(int bit) const { return (words_[bit >> 6] >> (bit & 63)) & 1; }
  int popcount() const;

  const std::vector<std::uint64_t> &words() const { return words_; }

  bool operator==(const Fingerprint &) const = default;

private:
  std::vector<std::uint64_t> words_;
  int nbits_ = 0;
  int radius_ = 0;
};

inline constexpr int kDefaultRadius = 2;
inline constexpr int kDefaultBits = 2048;

// 64-bit environment identifiers for every atom at radius 0..radius.
// Entry [r][i] describes the neighbourhood of atom i out to r bonds.
std::vector<std::vector<std::uint64_t>> atom_environments(const Molecule &mol,
                                                          int radius);

// Distinct environment identifiers over all atoms and radii, sorted.
std::vector<std::uint64_t> environment_ids(const Molecule &mol, int radius);

/**
 * ECFP-style fingerprint. Atom invariants are element, heavy degree, formal
 * charge, hydrogen count and ring membership; each iteration hashes an atom's
 * previous identifier with the sorted (bond type, neighbour identifier)
 * pairs. Identifiers are folded modulo nbits.
 *
 * Requires radius >= 0 and nbits a power of two >= 64.
 */
Fingerprint circular_fingerprint(const Molecule &mol,
                                 int radius = kDefaultRadius,
                                 int nbits = kDefaultBits);

// |A & B| / |A | B|, 1.0 when both are empty. Throws std::invalid_argument
// on a width mismatch.
double tanimoto(const Fingerprint &a, const Fingerprint &b);

}  // namespace cga
