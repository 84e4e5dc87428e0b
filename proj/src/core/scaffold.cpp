#include "cga/core/scaffold.h"

#include <vector>

namespace cga {

Molecule murcko_scaffold(const Molecule &mol) {
  if (mol.ring_info().rings.empty())
    return {};

  const int n = mol.num_atoms();
  std::vector<std::uint8_t> keep(n, 1);
  std::vector<int> deg(n);
  std::vector<int> stack;
  for (int i = 0; i < n; ++i) {
    deg[i] = mol.degree(i);
    if (!mol.atom_in_ring(i) && deg[i] <= 1)
      stack.push_back(i);
  }
  while (!stack.empty()) {
    int a = stack.back();
    stack.pop_back();
    if (!keep[a])
      continue;
    keep[a] = 0;
    for (const auto &nb: mol.neighbors(a)) {
      if (keep[nb.atom] && --deg[nb.atom] <= 1 && !mol.atom_in_ring(nb.atom))
        stack.push_back(nb.atom);
    }
  }

  // Terminal atoms double-bonded onto the scaffold stay with it; without
  // them a lactone or pyridone ring would lose its aromaticity.
  std::vector<std::uint8_t> exo(n, 0);
  for (int i = 0; i < n; ++i) {
    if (keep[i] || mol.degree(i) != 1)
      continue;
    const auto &nb = mol.neighbors(i)[0];
    if (keep[nb.atom] && mol.bond(nb.bond).order == 2)
      exo[i] = 1;
  }

  std::vector<int> atoms;
  for (int i = 0; i < n; ++i)
    if (keep[i] || exo[i])
      atoms.push_back(i);
  return induced_subgraph(mol, atoms);
}

Molecule renumber_atoms(const Molecule &mol, std::span<const int> new_index) {
  const int n = mol.num_atoms();
  std::vector<int> old_at(n);
  for (int i = 0; i < n; ++i)
    old_at[new_index[i]] = i;

  MoleculeBuilder builder;
  for (int k = 0; k < n; ++k)
    builder.add_atom(mol.atom(old_at[k]));
  for (int b = 0; b < mol.num_bonds(); ++b) {
    const Bond &bond = mol.bond(b);
    builder.add_bond(new_index[bond.begin], new_index[bond.end],
                     bond.aromatic ? BondType::kAromatic
                                   : static_cast<BondType>(bond.order));
  }
  // Carry the existing kekulé assignment over so aromatic systems rebuild
  // the same way.
  for (int i = 0; i < n; ++i) {
    if (!mol.atom(i).aromatic)
      continue;
    bool has_pi = false;
    for (const auto &nb: mol.neighbors(i))
      if (mol.bond(nb.bond).aromatic && mol.bond(nb.bond).order == 2)
        has_pi = true;
    builder.set_pi_hint(new_index[i], has_pi);
  }
  return builder.build();
}

}  // namespace cga
