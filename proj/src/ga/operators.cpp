#include "cga/ga/operators.h"

#include <algorithm>
#include <set>

#include "cga/fmt/smiles.h"

namespace cga {
namespace {

// Open valence left where a cut bond was removed.
struct Site {
  int atom;  // parent atom index
  int order;
  bool aromatic;
};

struct Fragment {
  const Molecule *mol;
  std::vector<int> atoms;
  std::vector<Site> sites;  // in cut-bond order
};

// Splits mol along the cut bonds into the side containing the first cut
// bond's begin atom and the rest.
std::pair<Fragment, Fragment> split(const Molecule &mol,
                                    std::span<const int> cuts) {
  const int n = mol.num_atoms();
  std::vector<std::uint8_t> side(n, 0);
  std::vector<int> stack { mol.bond(cuts[0]).begin };
  side[stack[0]] = 1;
  while (!stack.empty()) {
    int a = stack.back();
    stack.pop_back();
    for (const auto &nb: mol.neighbors(a)) {
      if (side[nb.atom]
          || std::find(cuts.begin(), cuts.end(), nb.bond) != cuts.end())
        continue;
      side[nb.atom] = 1;
      stack.push_back(nb.atom);
    }
  }

  Fragment a { &mol, {}, {} };
  Fragment b { &mol, {}, {} };
  for (int i = 0; i < n; ++i)
    (side[i] ? a : b).atoms.push_back(i);
  for (int c: cuts) {
    const Bond &bond = mol.bond(c);
    const int in_a = side[bond.begin] ? bond.begin : bond.end;
    a.sites.push_back({ in_a, bond.order, bond.aromatic });
    b.sites.push_back({ bond.other(in_a), bond.order, bond.aromatic });
  }
  return { std::move(a), std::move(b) };
}

bool needs_pi(const Molecule &mol, int atom) {
  for (const auto &nb: mol.neighbors(atom)) {
    const Bond &bond = mol.bond(nb.bond);
    if (bond.aromatic && bond.order == 2)
      return true;
  }
  return false;
}

// Joins two fragments, connecting f.sites[k] with g.sites[pairing[k]].
// In aromatic mode, bonds that were aromatic on both sides stay aromatic
// and are re-kekulized; otherwise the kekule orders are used and a joining
// bond takes the smaller of the two orders it replaces.
Molecule join(const Fragment &f, const Fragment &g,
              std::span<const int> pairing, bool aromatic) {
  struct PendingBond {
    int a;
    int b;
    BondType type;
  };
  std::vector<PendingBond> bonds;
  std::vector<int> remap_f(f.mol->num_atoms(), -1);
  std::vector<int> remap_g(g.mol->num_atoms(), -1);
  int next = 0;
  for (int a: f.atoms)
    remap_f[a] = next++;
  for (int a: g.atoms)
    remap_g[a] = next++;

  auto internal = [&](const Fragment &frag, const std::vector<int> &remap) {
    for (int b = 0; b < frag.mol->num_bonds(); ++b) {
      const Bond &bond = frag.mol->bond(b);
      const int x = remap[bond.begin];
      const int y = remap[bond.end];
      if (x < 0 || y < 0)
        continue;  // cut bonds always span the two sides
      bonds.push_back({ x, y,
                        aromatic && bond.aromatic
                            ? BondType::kAromatic
                            : static_cast<BondType>(bond.order) });
    }
  };
  internal(f, remap_f);
  internal(g, remap_g);

  for (std::size_t k = 0; k < f.sites.size(); ++k) {
    const Site &s = f.sites[k];
    const Site &t = g.sites[pairing[k]];
    const BondType type = aromatic && s.aromatic && t.aromatic
                              ? BondType::kAromatic
                              : static_cast<BondType>(std::min(s.order, t.order));
    bonds.push_back({ remap_f[s.atom], remap_g[t.atom], type });
  }

  std::vector<std::uint8_t> in_aromatic(next, 0);
  for (const auto &b: bonds)
    if (b.type == BondType::kAromatic)
      in_aromatic[b.a] = in_aromatic[b.b] = 1;

  MoleculeBuilder builder;
  auto add_atoms = [&](const Fragment &frag, const std::vector<int> &remap) {
    for (int a: frag.atoms) {
      Atom atom = frag.mol->atom(a);
      atom.aromatic = in_aromatic[remap[a]] != 0;
      builder.add_atom(atom);
      if (atom.aromatic)
        builder.set_pi_hint(remap[a], needs_pi(*frag.mol, a));
    }
  };
  add_atoms(f, remap_f);
  add_atoms(g, remap_g);
  for (const auto &b: bonds)
    builder.add_bond(b.a, b.b, b.type);
  return builder.build();
}

std::optional<Molecule> try_join(const Fragment &f, const Fragment &g,
                                 std::span<const int> pairing,
                                 std::size_t max_len) {
  bool any_aromatic = false;
  for (std::size_t k = 0; k < f.sites.size(); ++k)
    any_aromatic |= f.sites[k].aromatic && g.sites[pairing[k]].aromatic;

  for (bool aromatic: { true, false }) {
    if (aromatic && !any_aromatic)
      continue;
    try {
      Molecule child = join(f, g, pairing, aromatic);
      if (smiles_length(child) > max_len)
        return std::nullopt;
      return child;
    } catch (const MoleculeError &) {
      // Aromatic rejoin failed to kekulize or the join duplicated a bond.
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<int> acyclic_single_bonds(const Molecule &mol) {
  std::vector<int> out;
  for (int b = 0; b < mol.num_bonds(); ++b) {
    const Bond &bond = mol.bond(b);
    if (!mol.bond_in_ring(b) && bond.order == 1 && !bond.aromatic)
      out.push_back(b);
  }
  return out;
}

std::vector<std::pair<int, int>> ring_cut_pairs(const Molecule &mol) {
  std::set<std::pair<int, int>> pairs;
  std::vector<std::uint8_t> seen(mol.num_atoms());
  std::vector<int> stack;
  auto separates = [&](int b1, int b2) {
    std::fill(seen.begin(), seen.end(), 0);
    const Bond &bond = mol.bond(b1);
    stack.assign(1, bond.begin);
    seen[bond.begin] = 1;
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (const auto &nb: mol.neighbors(a)) {
        if (nb.bond == b1 || nb.bond == b2 || seen[nb.atom])
          continue;
        if (nb.atom == bond.end)
          return false;
        seen[nb.atom] = 1;
        stack.push_back(nb.atom);
      }
    }
    return true;
  };

  for (const auto &ring: mol.ring_info().rings) {
    std::vector<int> ring_bonds;
    for (std::size_t k = 0; k < ring.size(); ++k)
      ring_bonds.push_back(mol.find_bond(ring[k], ring[(k + 1) % ring.size()]));
    std::sort(ring_bonds.begin(), ring_bonds.end());
    for (std::size_t i = 0; i < ring_bonds.size(); ++i)
      for (std::size_t j = i + 1; j < ring_bonds.size(); ++j)
        if (separates(ring_bonds[i], ring_bonds[j]))
          pairs.emplace(ring_bonds[i], ring_bonds[j]);
  }
  return { pairs.begin(), pairs.end() };
}

std::vector<Molecule> crossover_at(const Molecule &p1, std::span<const int> cuts1,
                                   const Molecule &p2, std::span<const int> cuts2,
                                   Rng &rng, std::size_t max_smiles_len) {
  const auto [a1, a2] = split(p1, cuts1);
  const auto [b1, b2] = split(p2, cuts2);
  std::vector<Molecule> children;
  for (const Fragment *f: { &a1, &a2 }) {
    for (const Fragment *g: { &b1, &b2 }) {
      std::vector<int> pairing(f->sites.size());
      for (std::size_t k = 0; k < pairing.size(); ++k)
        pairing[k] = static_cast<int>(k);
      if (pairing.size() == 2 && bernoulli(rng, 0.5))
        std::swap(pairing[0], pairing[1]);
      if (auto child = try_join(*f, *g, pairing, max_smiles_len))
        children.push_back(std::move(*child));
    }
  }
  return children;
}

CrossoverResult crossover_with(CutMode mode, const Molecule &p1,
                               const Molecule &p2, Rng &rng,
                               std::size_t max_smiles_len) {
  CrossoverResult result;
  if (mode == CutMode::kNonRing) {
    const auto c1 = acyclic_single_bonds(p1);
    const auto c2 = acyclic_single_bonds(p2);
    if (c1.empty() || c2.empty())
      return result;
    const int b1 = c1[uniform_index(rng, c1.size())];
    const int b2 = c2[uniform_index(rng, c2.size())];
    result.children = crossover_at(p1, std::span(&b1, 1), p2,
                                   std::span(&b2, 1), rng, max_smiles_len);
  } else {
    const auto c1 = ring_cut_pairs(p1);
    const auto c2 = ring_cut_pairs(p2);
    if (c1.empty() || c2.empty())
      return result;
    const auto r1 = c1[uniform_index(rng, c1.size())];
    const auto r2 = c2[uniform_index(rng, c2.size())];
    const int cuts1[] { r1.first, r1.second };
    const int cuts2[] { r2.first, r2.second };
    result.children = crossover_at(p1, cuts1, p2, cuts2, rng, max_smiles_len);
  }
  result.mode = mode;
  return result;
}

CrossoverResult crossover(const Molecule &p1, const Molecule &p2, Rng &rng,
                          std::size_t max_smiles_len) {
  const CutMode first = bernoulli(rng, 0.5) ? CutMode::kRing
                                            : CutMode::kNonRing;
  CrossoverResult r = crossover_with(first, p1, p2, rng, max_smiles_len);
  if (r.mode)
    return r;
  const CutMode second = first == CutMode::kRing ? CutMode::kNonRing
                                                 : CutMode::kRing;
  return crossover_with(second, p1, p2, rng, max_smiles_len);
}

}  // namespace cga
