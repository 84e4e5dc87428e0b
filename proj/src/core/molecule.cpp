#include "cga/core/molecule.h"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "cga/core/rings.h"

namespace cga {
namespace {

std::string atom_label(const Atom &atom, int idx) {
  return std::string(element_symbol(atom.element)) + " atom "
         + std::to_string(idx);
}

// Default implicit hydrogen count of an atom with the given bond order sum.
int default_hydrogens(const Atom &atom, int bond_sum) {
  auto v = lowest_valence_at_least(atom.element, atom.formal_charge, bond_sum);
  return v ? *v - bond_sum : 0;
}

class Kekulizer {
public:
  Kekulizer(int n, std::vector<std::array<int, 3>> edges,
            std::vector<std::uint8_t> needs)
      : n_(n), edges_(std::move(edges)), needs_(std::move(needs)),
        mate_(n, -1), incident_(n) {
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      incident_[edges_[e][0]].push_back(e);
      incident_[edges_[e][1]].push_back(e);
    }
  }

  // Returns the matched edge ids (those become double bonds).
  bool solve(std::vector<int> &matched) {
    matched.clear();
    steps_ = 0;
    if (!recurse(matched))
      return false;
    return true;
  }

private:
  bool recurse(std::vector<int> &matched) {
    if (++steps_ > kMaxSteps)
      return false;

    int best = -1, best_options = 1 << 30;
    for (int a = 0; a < n_; ++a) {
      if (!needs_[a] || mate_[a] >= 0)
        continue;
      int options = 0;
      for (int e: incident_[a]) {
        int b = edges_[e][0] == a ? edges_[e][1] : edges_[e][0];
        if (needs_[b] && mate_[b] < 0)
          ++options;
      }
      if (options < best_options) {
        best = a;
        best_options = options;
      }
    }
    if (best < 0)
      return true;
    if (best_options == 0)
      return false;

    for (int e: incident_[best]) {
      int b = edges_[e][0] == best ? edges_[e][1] : edges_[e][0];
      if (!needs_[b] || mate_[b] >= 0)
        continue;
      mate_[best] = b;
      mate_[b] = best;
      matched.push_back(edges_[e][2]);
      if (recurse(matched))
        return true;
      matched.pop_back();
      mate_[best] = -1;
      mate_[b] = -1;
    }
    return false;
  }

  static constexpr int kMaxSteps = 200000;

  int n_;
  std::vector<std::array<int, 3>> edges_;  // local a, local b, bond id
  std::vector<std::uint8_t> needs_;
  std::vector<int> mate_;
  std::vector<std::vector<int>> incident_;
  int steps_ = 0;
};

// Pi electrons an atom donates to a ring: 0, 1, 2, or -1 if the atom cannot
// be part of an aromatic ring.
int pi_contribution(const Molecule &mol, int a,
                    const std::vector<std::uint8_t> &bond_ring) {
  const Atom &atom = mol.atom(a);
  if (!can_be_aromatic(atom.element))
    return -1;

  int ring_double = 0, exo_double = 0, exo_partner = -1;
  for (const auto &nb: mol.neighbors(a)) {
    const Bond &bond = mol.bond(nb.bond);
    if (bond.order == 3)
      return -1;
    if (bond.order == 2) {
      if (bond_ring[nb.bond]) {
        ++ring_double;
      } else {
        ++exo_double;
        exo_partner = nb.atom;
      }
    }
  }
  const int connections = mol.degree(a) + mol.total_hydrogens(a);
  const int q = atom.formal_charge;

  if (ring_double == 1 && exo_double == 0)
    return connections <= 3 ? 1 : -1;
  if (ring_double > 0 || exo_double > 1)
    return -1;
  if (exo_double == 1) {
    Element partner = mol.atom(exo_partner).element;
    if (partner == Element::kO || partner == Element::kN
        || partner == Element::kS)
      return 0;
    return -1;
  }

  switch (atom.element) {
  case Element::kN:
  case Element::kP:
    if (q == 0 && connections == 3)
      return 2;
    if (q == -1 && connections == 2)
      return 2;
    return -1;
  case Element::kO:
  case Element::kS:
    return q == 0 && connections == 2 ? 2 : -1;
  case Element::kC:
    if (q == -1 && connections == 3)
      return 2;
    if (q == 1 && connections == 3)
      return 0;
    return -1;
  case Element::kB:
    return q == 0 && connections == 3 ? 0 : -1;
  default:
    return -1;
  }
}

bool huckel(int electrons) { return electrons >= 6 && electrons % 4 == 2; }

}  // namespace

int Molecule::find_bond(int a, int b) const {
  for (const auto &nb: adj_[a])
    if (nb.atom == b)
      return nb.bond;
  return -1;
}

int Molecule::bond_order_sum(int i) const {
  int sum = 0;
  for (const auto &nb: adj_[i])
    sum += bonds_[nb.bond].order;
  return sum;
}

int MoleculeBuilder::add_atom(const Atom &atom) {
  atoms_.push_back(atom);
  pi_hint_.push_back(-1);
  return static_cast<int>(atoms_.size()) - 1;
}

bool MoleculeBuilder::has_bond(int a, int b) const {
  return std::any_of(bonds_.begin(), bonds_.end(), [&](const PendingBond &pb) {
    return (pb.a == a && pb.b == b) || (pb.a == b && pb.b == a);
  });
}

void MoleculeBuilder::add_bond(int a, int b, BondType type) {
  const int n = num_atoms();
  if (a < 0 || b < 0 || a >= n || b >= n)
    throw MoleculeError(MoleculeErrorKind::kBadBond, -1,
                        "bond endpoint out of range");
  if (a == b)
    throw MoleculeError(MoleculeErrorKind::kBadBond, a,
                        "bond from an atom to itself");
  if (has_bond(a, b))
    throw MoleculeError(MoleculeErrorKind::kBadBond, a,
                        "duplicate bond between atoms " + std::to_string(a)
                            + " and " + std::to_string(b));
  bonds_.push_back({ a, b, type });
}

void MoleculeBuilder::set_pi_hint(int atom, bool needs_pi) {
  pi_hint_[atom] = needs_pi ? 1 : 0;
}

Molecule MoleculeBuilder::build() const {
  Molecule m;
  const int n = num_atoms();
  m.atoms_ = atoms_;
  m.adj_.assign(n, {});
  m.bonds_.reserve(bonds_.size());

  std::vector<int> aromatic_bonds;
  std::vector<int> aromatic_degree(n, 0);
  for (const auto &pb: bonds_) {
    const int id = static_cast<int>(m.bonds_.size());
    const bool arom = pb.type == BondType::kAromatic;
    m.bonds_.push_back({ pb.a, pb.b, arom ? 1 : static_cast<int>(pb.type),
                         false });
    m.adj_[pb.a].push_back({ pb.b, id });
    m.adj_[pb.b].push_back({ pb.a, id });
    if (arom) {
      aromatic_bonds.push_back(id);
      ++aromatic_degree[pb.a];
      ++aromatic_degree[pb.b];
    }
  }

  if (n == 0)
    return m;

  // Connectivity.
  {
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<int> stack { 0 };
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (const auto &nb: m.adj_[a]) {
        if (!seen[nb.atom]) {
          seen[nb.atom] = 1;
          ++count;
          stack.push_back(nb.atom);
        }
      }
    }
    if (count != n)
      throw MoleculeError(MoleculeErrorKind::kDisconnected, -1,
                          "molecule has more than one fragment");
  }

  for (int i = 0; i < n; ++i) {
    const Atom &atom = atoms_[i];
    if (allowed_valences(atom.element, atom.formal_charge).empty())
      throw MoleculeError(MoleculeErrorKind::kValence, i,
                          "unsupported charge state on "
                              + atom_label(atom, i));
    if (atom.explicit_h < 0)
      throw MoleculeError(MoleculeErrorKind::kValence, i,
                          "negative hydrogen count on " + atom_label(atom, i));
    if (atom.aromatic && aromatic_degree[i] == 0)
      throw MoleculeError(MoleculeErrorKind::kAromaticity, i,
                          "non-ring " + atom_label(atom, i)
                              + " marked aromatic");
  }

  // Kekulize the aromatic bonds.
  if (!aromatic_bonds.empty()) {
    std::vector<std::uint8_t> needs(n, 0);
    for (int i = 0; i < n; ++i) {
      if (aromatic_degree[i] == 0)
        continue;
      if (pi_hint_[i] >= 0) {
        needs[i] = static_cast<std::uint8_t>(pi_hint_[i]);
        continue;
      }
      const Atom &atom = atoms_[i];
      int sum = atom.explicit_h;
      for (const auto &nb: m.adj_[i])
        sum += m.bonds_[nb.bond].order;  // aromatic counted as 1
      auto v = lowest_valence_at_least(atom.element, atom.formal_charge, sum);
      if (!v)
        throw MoleculeError(MoleculeErrorKind::kValence, i,
                            "valence exceeded on " + atom_label(atom, i));
      needs[i] = *v - sum >= 1 ? 1 : 0;
    }

    std::vector<std::array<int, 3>> edges;
    for (int id: aromatic_bonds) {
      const Bond &b = m.bonds_[id];
      if (needs[b.begin] && needs[b.end])
        edges.push_back({ b.begin, b.end, id });
    }
    Kekulizer kek(n, std::move(edges), needs);
    std::vector<int> doubles;
    if (!kek.solve(doubles)) {
      int culprit = -1;
      for (int i = 0; i < n && culprit < 0; ++i)
        if (needs[i])
          culprit = i;
      throw MoleculeError(MoleculeErrorKind::kKekulize, culprit,
                          "cannot kekulize aromatic system");
    }
    for (int id: doubles)
      m.bonds_[id].order = 2;
  }

  // Hydrogens.
  m.hydrogens_.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    Atom &atom = m.atoms_[i];
    const int bond_sum = m.bond_order_sum(i);
    int total;
    if (atom.no_implicit) {
      total = atom.explicit_h;
      if (bond_sum + total > max_valence(atom.element, atom.formal_charge))
        throw MoleculeError(MoleculeErrorKind::kValence, i,
                            "valence exceeded on " + atom_label(atom, i));
    } else {
      auto v = lowest_valence_at_least(atom.element, atom.formal_charge,
                                       bond_sum + atom.explicit_h);
      if (!v)
        throw MoleculeError(MoleculeErrorKind::kValence, i,
                            "valence exceeded on " + atom_label(atom, i));
      total = *v - bond_sum;
    }
    if (total == default_hydrogens(atom, bond_sum)) {
      atom.explicit_h = 0;
      atom.no_implicit = false;
    } else {
      atom.explicit_h = total;
      atom.no_implicit = true;
    }
    m.hydrogens_[i] = total;
  }

  // Rings.
  m.rings_ = internal::find_sssr(m.adj_, m.num_bonds(), m.bond_ring_);
  m.atom_ring_.assign(n, 0);
  for (const auto &ring: m.rings_.rings)
    for (int a: ring)
      m.atom_ring_[a] = 1;

  // Aromaticity.
  for (auto &atom: m.atoms_)
    atom.aromatic = false;
  const auto &rings = m.rings_.rings;
  if (!rings.empty()) {
    std::vector<int> contrib(n, -1);
    for (int i = 0; i < n; ++i)
      if (m.atom_ring_[i])
        contrib[i] = pi_contribution(m, i, m.bond_ring_);

    std::vector<std::uint8_t> ring_aromatic(rings.size(), 0);
    auto ring_electrons = [&](const std::vector<int> &atoms) {
      int total = 0;
      for (int a: atoms) {
        if (contrib[a] < 0)
          return -1;
        total += contrib[a];
      }
      return total;
    };
    for (std::size_t r = 0; r < rings.size(); ++r)
      ring_aromatic[r] = huckel(ring_electrons(rings[r])) ? 1 : 0;

    // Fused pairs, e.g. azulene.
    for (std::size_t r = 0; r < rings.size(); ++r) {
      for (std::size_t s = r + 1; s < rings.size(); ++s) {
        if (ring_aromatic[r] && ring_aromatic[s])
          continue;
        int shared = 0;
        for (int a: rings[r])
          if (std::find(rings[s].begin(), rings[s].end(), a) != rings[s].end())
            ++shared;
        if (shared < 2)
          continue;
        std::vector<int> uni = rings[r];
        for (int a: rings[s])
          if (std::find(uni.begin(), uni.end(), a) == uni.end())
            uni.push_back(a);
        if (huckel(ring_electrons(uni))) {
          ring_aromatic[r] = 1;
          ring_aromatic[s] = 1;
        }
      }
    }

    for (std::size_t r = 0; r < rings.size(); ++r) {
      if (!ring_aromatic[r])
        continue;
      const auto &ring = rings[r];
      const int len = static_cast<int>(ring.size());
      for (int k = 0; k < len; ++k) {
        m.atoms_[ring[k]].aromatic = true;
        int b = m.find_bond(ring[k], ring[(k + 1) % len]);
        m.bonds_[b].aromatic = true;
      }
    }
  }

  return m;
}

bool check_valence(const Molecule &mol) {
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const Atom &atom = mol.atom(i);
    int maxv = max_valence(atom.element, atom.formal_charge);
    if (maxv < 0)
      return false;
    if (mol.bond_order_sum(i) + mol.total_hydrogens(i) > maxv)
      return false;
  }
  return true;
}

MoleculeBuilder to_builder(const Molecule &mol, bool keep_aromatic) {
  MoleculeBuilder builder;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    Atom atom = mol.atom(i);
    if (!keep_aromatic)
      atom.aromatic = false;
    builder.add_atom(atom);
  }
  for (int b = 0; b < mol.num_bonds(); ++b) {
    const Bond &bond = mol.bond(b);
    BondType type = keep_aromatic && bond.aromatic
                        ? BondType::kAromatic
                        : static_cast<BondType>(bond.order);
    builder.add_bond(bond.begin, bond.end, type);
  }
  if (keep_aromatic) {
    for (int i = 0; i < mol.num_atoms(); ++i) {
      if (!mol.atom(i).aromatic)
        continue;
      bool has_pi = false;
      for (const auto &nb: mol.neighbors(i)) {
        const Bond &bond = mol.bond(nb.bond);
        if (bond.aromatic && bond.order == 2)
          has_pi = true;
      }
      builder.set_pi_hint(i, has_pi);
    }
  }
  return builder;
}

Molecule induced_subgraph(const Molecule &mol, std::span<const int> atoms) {
  std::vector<int> remap(mol.num_atoms(), -1);
  MoleculeBuilder builder;
  for (int a: atoms) {
    Atom atom = mol.atom(a);
    atom.aromatic = false;
    remap[a] = builder.add_atom(atom);
  }
  for (int b = 0; b < mol.num_bonds(); ++b) {
    const Bond &bond = mol.bond(b);
    int x = remap[bond.begin], y = remap[bond.end];
    if (x >= 0 && y >= 0)
      builder.add_bond(x, y, static_cast<BondType>(bond.order));
  }
  return builder.build();
}

}  // namespace cga
