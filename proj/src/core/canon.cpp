#include "cga/core/canon.h"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "cga/util/hash.h"

namespace cga {
namespace {

using Key = std::pair<std::uint64_t, std::uint64_t>;

// Assigns rank = number of atoms whose key compares strictly smaller.
int rank_by(std::vector<int> &ranks, std::vector<int> &idx,
            const std::vector<Key> &keys) {
  const int n = static_cast<int>(ranks.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int x, int y) { return keys[x] < keys[y]; });
  int classes = 0;
  for (int k = 0; k < n; ++k) {
    if (k == 0 || keys[idx[k - 1]] < keys[idx[k]]) {
      ranks[idx[k]] = k;
      ++classes;
    } else {
      ranks[idx[k]] = ranks[idx[k - 1]];
    }
  }
  return classes;
}

}  // namespace

std::vector<int> canonical_ranks(const Molecule &mol) {
  const int n = mol.num_atoms();
  std::vector<int> ranks(n, 0), idx(n);
  if (n == 0)
    return ranks;

  std::vector<Key> keys(n);
  for (int i = 0; i < n; ++i) {
    const Atom &a = mol.atom(i);
    std::uint64_t k = static_cast<std::uint64_t>(mol.degree(i));
    k = k << 8 | static_cast<std::uint64_t>(atomic_number(a.element));
    k = k << 1 | (a.aromatic ? 1U : 0U);
    k = k << 8 | static_cast<std::uint64_t>(a.formal_charge + 128);
    k = k << 8 | static_cast<std::uint64_t>(mol.total_hydrogens(i));
    k = k << 1 | (mol.atom_in_ring(i) ? 1U : 0U);
    keys[i] = { k, 0 };
  }
  int classes = rank_by(ranks, idx, keys);

  // Neighbour environments are reduced to a hash of the sorted
  // (neighbour rank, bond code) list. The hash depends only on invariants,
  // so a collision can merge classes but never breaks canonicity; the
  // tie-breaking below still separates everything.
  std::vector<std::vector<std::pair<int, int>>> nbs(n);
  for (int i = 0; i < n; ++i)
    for (const auto &nb: mol.neighbors(i))
      nbs[i].emplace_back(nb.atom, mol.bond_type_code(nb.bond));
  std::vector<std::uint64_t> env, hash(n);
  auto env_hash = [&](int i) {
    env.clear();
    for (const auto &[atom, code]: nbs[i])
      env.push_back(static_cast<std::uint64_t>(ranks[atom]) << 4
                    | static_cast<std::uint64_t>(code));
    std::sort(env.begin(), env.end());
    std::uint64_t h = env.size();
    for (auto e: env)
      h = hash_combine(h, e);
    return h;
  };

  // idx stays sorted by rank and every class occupies the block of idx
  // starting at its rank, so only tied blocks need hashing and sorting.
  auto refine = [&]() {
    while (true) {
      for (int s = 0; s < n;) {
        int e = s + 1;
        while (e < n && ranks[idx[e]] == s)
          ++e;
        for (int k = s; e - s > 1 && k < e; ++k)
          hash[idx[k]] = env_hash(idx[k]);
        s = e;
      }
      int now = 0;
      for (int s = 0; s < n;) {
        int e = s + 1;
        while (e < n && ranks[idx[e]] == s)
          ++e;
        std::sort(idx.begin() + s, idx.begin() + e,
                  [&](int x, int y) { return hash[x] < hash[y]; });
        int start = s;
        for (int k = s; k < e; ++k) {
          if (k > s && hash[idx[k - 1]] != hash[idx[k]])
            start = k;
          if (k == start)
            ++now;
          ranks[idx[k]] = start;
        }
        s = e;
      }
      if (now == classes)
        break;
      classes = now;
    }
  };

  refine();
  while (classes < n) {
    // Break the lowest tie by promoting its lowest-index member, then
    // refine again.
    int s = 0;
    while (s + 1 < n && ranks[idx[s + 1]] != s)
      ++s;
    int e = s + 1;
    while (e < n && ranks[idx[e]] == s)
      ++e;
    int chosen = idx[s];
    for (int k = s; k < e; ++k)
      chosen = std::min(chosen, idx[k]);
    std::iter_swap(idx.begin() + s,
                   std::find(idx.begin() + s, idx.begin() + e, chosen));
    for (int k = s + 1; k < e; ++k)
      ranks[idx[k]] = s + 1;
    ++classes;
    refine();
  }
  return ranks;
}

Traversal canonical_traversal(const Molecule &mol, std::span<const int> ranks) {
  const int n = mol.num_atoms();
  Traversal t;
  t.parent_bond.assign(n, -1);
  t.children.assign(n, {});
  t.ring_bonds.assign(n, {});
  if (n == 0)
    return t;

  int root = 0;
  for (int i = 1; i < n; ++i)
    if (ranks[i] < ranks[root])
      root = i;

  std::vector<std::uint8_t> visited(n, 0);
  std::vector<std::uint8_t> ring_bond(mol.num_bonds(), 0);
  t.order.reserve(n);

  // Explicit stack of (atom, sorted neighbours, cursor).
  struct Frame {
    int atom;
    std::vector<Neighbor> nbs;
    std::size_t next = 0;
  };
  auto make_frame = [&](int a) {
    Frame f { a, { mol.neighbors(a).begin(), mol.neighbors(a).end() }, 0 };
    std::sort(f.nbs.begin(), f.nbs.end(),
              [&](const Neighbor &x, const Neighbor &y) {
                return ranks[x.atom] < ranks[y.atom];
              });
    return f;
  };

  std::vector<Frame> stack;
  visited[root] = 1;
  t.order.push_back(root);
  stack.push_back(make_frame(root));
  while (!stack.empty()) {
    Frame &f = stack.back();
    if (f.next == f.nbs.size()) {
      stack.pop_back();
      continue;
    }
    const Neighbor nb = f.nbs[f.next++];
    const int u = f.atom;
    if (nb.bond == t.parent_bond[u])
      continue;
    if (!visited[nb.atom]) {
      visited[nb.atom] = 1;
      t.parent_bond[nb.atom] = nb.bond;
      t.children[u].push_back(nb.atom);
      t.order.push_back(nb.atom);
      stack.push_back(make_frame(nb.atom));
    } else if (!ring_bond[nb.bond]) {
      ring_bond[nb.bond] = 1;
      t.ring_bonds[nb.atom].push_back(nb.bond);
      t.ring_bonds[u].push_back(nb.bond);
    }
  }
  return t;
}

}  // namespace cga
