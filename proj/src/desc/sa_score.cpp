#include "cga/desc/sa_score.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cga/fp/fingerprint.h"

namespace cga {

void FragmentTable::add(const Molecule &mol) {
  for (const auto &layer: atom_environments(mol, kFragmentRadius)) {
    for (std::uint64_t id: layer) {
      ++counts_[id];
      ++total_;
    }
  }
}

FragmentTable FragmentTable::build(std::span<const Molecule> mols) {
  FragmentTable table;
  for (const Molecule &m: mols)
    table.add(m);
  return table;
}

std::uint64_t FragmentTable::count(std::uint64_t id) const {
  auto it = counts_.find(id);
  return it == counts_.end() ? 0 : it->second;
}

void FragmentTable::save(std::ostream &out) const {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> rows(counts_.begin(),
                                                            counts_.end());
  std::sort(rows.begin(), rows.end());
  for (const auto &[id, n]: rows)
    out << std::hex << id << std::dec << '\t' << n << '\n';
}

FragmentTable FragmentTable::load(std::istream &in) {
  FragmentTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    std::istringstream fields(line);
    std::uint64_t id = 0;
    std::uint64_t n = 0;
    if (!(fields >> std::hex >> id >> std::dec >> n) || n == 0)
      throw std::runtime_error("bad fragment table line "
                               + std::to_string(lineno));
    table.counts_[id] += n;
    table.total_ += n;
  }
  return table;
}

int fused_ring_pairs(const Molecule &mol) {
  const auto &rings = mol.ring_info().rings;
  std::vector<std::vector<int>> bonds(rings.size());
  for (std::size_t r = 0; r < rings.size(); ++r) {
    const auto &ring = rings[r];
    for (std::size_t k = 0; k < ring.size(); ++k)
      bonds[r].push_back(mol.find_bond(ring[k], ring[(k + 1) % ring.size()]));
    std::sort(bonds[r].begin(), bonds[r].end());
  }
  int pairs = 0;
  std::vector<int> shared;
  for (std::size_t r = 0; r < rings.size(); ++r) {
    for (std::size_t s = r + 1; s < rings.size(); ++s) {
      shared.clear();
      std::set_intersection(bonds[r].begin(), bonds[r].end(),
                            bonds[s].begin(), bonds[s].end(),
                            std::back_inserter(shared));
      if (!shared.empty())
        ++pairs;
    }
  }
  return pairs;
}

SaBreakdown sa_breakdown(const Molecule &mol, const FragmentTable &table) {
  SaBreakdown sa;
  if (mol.empty())
    return sa;

  if (!table.empty()) {
    const double total = static_cast<double>(table.total());
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto &layer: atom_environments(mol, kFragmentRadius)) {
      for (std::uint64_t id: layer) {
        const double freq = static_cast<double>(std::max<std::uint64_t>(
            table.count(id), 1));
        sum += std::log2(freq / total);
        ++n;
      }
    }
    sa.rarity = -sum / static_cast<double>(n);
  }

  sa.complexity = 0.5 * fused_ring_pairs(mol)
                  + (mol.ring_info().largest_ring_size > 8 ? 1.0 : 0.0)
                  + 0.05 * std::max(0, mol.num_atoms() - 30);
  sa.total = sa.rarity + sa.complexity;
  return sa;
}

double sa_score(const Molecule &mol, const FragmentTable &table) {
  return sa_breakdown(mol, table).total;
}

}  // namespace cga
