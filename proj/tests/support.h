#pragma once

#include <algorithm>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "cga/core/scaffold.h"
#include "cga/fmt/smiles.h"
#include "cga/util/random.h"

namespace cga::test {

inline std::string data_path(const std::string &name) {
  return std::string(CGA_DATA_DIR) + "/" + name;
}

// First `limit` SMILES of a dataset file (first token of each line).
inline std::vector<std::string> read_smiles(const std::string &path,
                                            std::size_t limit = SIZE_MAX) {
  std::ifstream in(path);
  std::vector<std::string> out;
  std::string line;
  while (out.size() < limit && std::getline(in, line)) {
    const auto end = line.find_first_of(" \t");
    std::string first = line.substr(0, end);
    if (!first.empty() && first[0] != '#')
      out.push_back(first);
  }
  return out;
}

inline std::vector<Molecule> sample_molecules(std::size_t limit = SIZE_MAX) {
  std::vector<Molecule> mols;
  for (const auto &s: read_smiles(data_path("zinc_sample_5k.smi"), limit))
    mols.push_back(parse_smiles(s));
  return mols;
}

// The same molecule with its atoms shuffled.
inline Molecule shuffled(const Molecule &mol, Rng &rng) {
  std::vector<int> perm(mol.num_atoms());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size(); i > 1; --i)
    std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
  return renumber_atoms(mol, perm);
}

}  // namespace cga::test
