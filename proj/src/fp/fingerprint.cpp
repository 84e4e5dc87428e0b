#include "cga/fp/fingerprint.h"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <utility>

#include "cga/util/hash.h"

namespace cga {

int Fingerprint::popcount() const {
  int total = 0;
  for (std::uint64_t w: words_)
    total += std::popcount(w);
  return total;
}

std::vector<std::vector<std::uint64_t>> atom_environments(const Molecule &mol,
                                                          int radius) {
  const int n = mol.num_atoms();
  std::vector<std::vector<std::uint64_t>> env(radius + 1,
                                              std::vector<std::uint64_t>(n));
  for (int i = 0; i < n; ++i) {
    const Atom &atom = mol.atom(i);
    std::uint64_t h = hash_combine(0, atomic_number(atom.element));
    h = hash_combine(h, mol.degree(i));
    h = hash_combine(h, static_cast<std::uint64_t>(atom.formal_charge + 8));
    h = hash_combine(h, mol.total_hydrogens(i));
    h = hash_combine(h, mol.atom_in_ring(i) ? 1 : 0);
    env[0][i] = h;
  }

  std::vector<std::pair<int, std::uint64_t>> shell;
  for (int r = 1; r <= radius; ++r) {
    for (int i = 0; i < n; ++i) {
      shell.clear();
      for (const auto &nb: mol.neighbors(i))
        shell.emplace_back(mol.bond_type_code(nb.bond), env[r - 1][nb.atom]);
      std::sort(shell.begin(), shell.end());
      std::uint64_t h = hash_combine(static_cast<std::uint64_t>(r),
                                     env[r - 1][i]);
      for (const auto &[type, id]: shell)
        h = hash_combine(hash_combine(h, type), id);
      env[r][i] = h;
    }
  }
  return env;
}

std::vector<std::uint64_t> environment_ids(const Molecule &mol, int radius) {
  std::vector<std::uint64_t> ids;
  for (const auto &layer: atom_environments(mol, radius))
    ids.insert(ids.end(), layer.begin(), layer.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

Fingerprint circular_fingerprint(const Molecule &mol, int radius, int nbits) {
  if (radius < 0)
    throw std::invalid_argument("fingerprint radius must be non-negative");
  if (nbits < 64 || !std::has_single_bit(static_cast<unsigned>(nbits)))
    throw std::invalid_argument("fingerprint width must be a power of two >= 64");

  Fingerprint fp(nbits, radius);
  for (std::uint64_t id: environment_ids(mol, radius))
    fp.set(static_cast<int>(id & static_cast<std::uint64_t>(nbits - 1)));
  return fp;
}

double tanimoto(const Fingerprint &a, const Fingerprint &b) {
  if (a.nbits() != b.nbits())
    throw std::invalid_argument("fingerprint widths differ");
  int both = 0;
  int either = 0;
  for (std::size_t k = 0; k < a.words().size(); ++k) {
    both += std::popcount(a.words()[k] & b.words()[k]);
    either += std::popcount(a.words()[k] | b.words()[k]);
  }
  return either == 0 ? 1.0 : static_cast<double>(both) / either;
}

}  // namespace cga
