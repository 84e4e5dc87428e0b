#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cga/core/element.h"

namespace cga {

struct Atom {
  Element element = Element::kC;
  int formal_charge = 0;
  // Hydrogens fixed by the input (bracket atoms). When no_implicit is false
  // the atom additionally receives implicit hydrogens up to its lowest
  // allowed valence.
  int explicit_h = 0;
  bool no_implicit = false;
  bool aromatic = false;
};

// Kekulized bond. The aromatic flag is set by aromaticity perception.
struct Bond {
  int begin = -1;
  int end = -1;
  int order = 1;
  bool aromatic = false;

  int other(int atom) const { return atom == begin ? end : begin; }
};

enum class BondType : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

struct Neighbor {
  int atom;
  int bond;
};

// Smallest set of smallest rings.
struct RingInfo {
  std::vector<std::vector<int>> rings;
  int largest_ring_size = 0;
};

enum class MoleculeErrorKind {
  kBadBond,
  kDisconnected,
  kValence,
  kAromaticity,
  kKekulize,
};

class MoleculeError: public std::runtime_error {
public:
  MoleculeError(MoleculeErrorKind kind, int atom, const std::string &what)
      : std::runtime_error(what), kind_(kind), atom_(atom) { }

  MoleculeErrorKind kind() const { return kind_; }
  // Offending atom index, -1 if not atom specific.
  int atom() const { return atom_; }

private:
  MoleculeErrorKind kind_;
  int atom_;
};

/**
 * Immutable, sanitized molecular graph.
 *
 * Every non-empty Molecule is connected, satisfies the valence table, is
 * kekulized (bond orders 1-3) and carries perceived ring and aromaticity
 * information. Instances are only produced by MoleculeBuilder::build().
 */
class Molecule {
public:
  Molecule() = default;

  bool empty() const { return atoms_.empty(); }
  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }

  const Atom &atom(int i) const { return atoms_[i]; }
  const Bond &bond(int b) const { return bonds_[b]; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Bond> bonds() const { return bonds_; }

  std::span<const Neighbor> neighbors(int i) const { return adj_[i]; }
  int degree(int i) const { return static_cast<int>(adj_[i].size()); }

  // Bond index between a and b, or -1.
  int find_bond(int a, int b) const;

  int bond_order_sum(int i) const;
  int total_hydrogens(int i) const { return hydrogens_[i]; }
  int implicit_hydrogens(int i) const {
    return hydrogens_[i] - atoms_[i].explicit_h;
  }

  // 1, 2, 3 for localized bonds, 4 for aromatic bonds.
  int bond_type_code(int b) const {
    return bonds_[b].aromatic ? 4 : bonds_[b].order;
  }

  const RingInfo &ring_info() const { return rings_; }
  bool atom_in_ring(int i) const { return atom_ring_[i] != 0; }
  bool bond_in_ring(int b) const { return bond_ring_[b] != 0; }

private:
  friend class MoleculeBuilder;

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adj_;
  std::vector<int> hydrogens_;
  RingInfo rings_;
  std::vector<std::uint8_t> atom_ring_;
  std::vector<std::uint8_t> bond_ring_;
};

/**
 * Mutable graph that is sanitized into a Molecule.
 *
 * Aromatic bonds (BondType::kAromatic) are kekulized by perfect matching over
 * the atoms that need a pi bond. Whether an atom needs one is derived from its
 * valence unless a hint is supplied with set_pi_hint().
 */
class MoleculeBuilder {
public:
  MoleculeBuilder() = default;

  int add_atom(const Atom &atom);
  // Throws MoleculeError(kBadBond) for self loops, duplicates or bad indices.
  void add_bond(int a, int b, BondType type);
  void set_pi_hint(int atom, bool needs_pi);

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  bool has_bond(int a, int b) const;

  // Throws MoleculeError on any invariant violation.
  Molecule build() const;

private:
  struct PendingBond {
    int a;
    int b;
    BondType type;
  };

  std::vector<Atom> atoms_;
  std::vector<PendingBond> bonds_;
  std::vector<std::int8_t> pi_hint_;  // -1 unset, 0 no, 1 yes
};

// True iff every atom's bond order sum plus hydrogens fits its valence table.
bool check_valence(const Molecule &mol);

// Copies the molecule into a builder with kekule bond orders and the atoms as
// stored, so hydrogens are recomputed for atoms without fixed counts.
// With keep_aromatic, aromatic bonds are emitted as kAromatic together with
// the pi hints needed to kekulize them again.
MoleculeBuilder to_builder(const Molecule &mol, bool keep_aromatic = false);

// Induced subgraph on the selected atoms. Hydrogens are recomputed for atoms
// without fixed counts. Throws if the selection is disconnected.
Molecule induced_subgraph(const Molecule &mol, std::span<const int> atoms);

}  // namespace cga
