#include "cga/core/rings.h"

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

namespace cga {
namespace internal {
namespace {

using EdgeSet = std::vector<std::uint64_t>;

struct Candidate {
  int length;
  EdgeSet edges;
};

bool test_bit(const EdgeSet &s, int i) { return (s[i >> 6] >> (i & 63)) & 1U; }
void set_bit(EdgeSet &s, int i) { s[i >> 6] |= std::uint64_t{1} << (i & 63); }

int highest_bit(const EdgeSet &s) {
  for (int w = static_cast<int>(s.size()) - 1; w >= 0; --w)
    if (s[w] != 0)
      return w * 64 + 63 - __builtin_clzll(s[w]);
  return -1;
}

// Orders a cycle given as a set of core-edge ids into an atom sequence
// starting at its smallest atom, walking towards the smaller neighbour.
std::vector<int> edges_to_cycle(const EdgeSet &edges,
                                const std::vector<int> &core_bond_ids,
                                const std::vector<std::array<int, 2>> &ends) {
  std::vector<std::array<int, 2>> cyc_edges;
  for (int e = 0; e < static_cast<int>(core_bond_ids.size()); ++e)
    if (test_bit(edges, e))
      cyc_edges.push_back(ends[e]);

  int start = cyc_edges.front()[0];
  for (const auto &e: cyc_edges)
    start = std::min({start, e[0], e[1]});

  auto next_of = [&](int atom, int prev) {
    int best = -1;
    for (const auto &e: cyc_edges) {
      int other = -1;
      if (e[0] == atom)
        other = e[1];
      else if (e[1] == atom)
        other = e[0];
      if (other < 0 || other == prev)
        continue;
      if (best < 0 || other < best)
        best = other;
    }
    return best;
  };

  std::vector<int> cycle { start };
  int prev = -1, cur = start;
  while (true) {
    int nxt = next_of(cur, prev);
    if (nxt == start || nxt < 0)
      break;
    cycle.push_back(nxt);
    prev = cur;
    cur = nxt;
    if (static_cast<int>(cycle.size()) > static_cast<int>(cyc_edges.size()))
      break;
  }
  return cycle;
}

// Minimum cycle basis of one biconnected block given with local atom and
// edge ids, via Horton's candidate set and Gaussian elimination over GF(2).
std::vector<EdgeSet> block_cycle_basis(
    const std::vector<std::vector<std::array<int, 2>>> &adj, int ec,
    int cyclomatic) {
  const int n = static_cast<int>(adj.size());
  const int words = (ec + 63) / 64;
  std::vector<EdgeSet> chosen;
  if (cyclomatic == 1) {
    EdgeSet all(words, 0);
    for (int e = 0; e < ec; ++e)
      set_bit(all, e);
    chosen.push_back(std::move(all));
    return chosen;
  }

  std::vector<std::array<int, 2>> ends(ec);
  for (int a = 0; a < n; ++a)
    for (const auto &[b, e]: adj[a])
      ends[e] = { a, b };

  // For every root r and edge (u, v): the cycle P(r, u) + (u, v) + P(v, r)
  // when the two shortest paths share only r.
  std::vector<Candidate> candidates;
  std::vector<int> dist(n), parent_atom(n), parent_edge(n);
  std::vector<int> mark(n, -1);
  std::vector<int> queue;
  for (int r = 0; r < n; ++r) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[r] = 0;
    parent_atom[r] = -1;
    parent_edge[r] = -1;
    queue.assign(1, r);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int a = queue[head];
      for (const auto &[b, e]: adj[a]) {
        if (dist[b] >= 0)
          continue;
        dist[b] = dist[a] + 1;
        parent_atom[b] = a;
        parent_edge[b] = e;
        queue.push_back(b);
      }
    }

    for (int e = 0; e < ec; ++e) {
      const int u = ends[e][0], v = ends[e][1];
      if (parent_edge[u] == e || parent_edge[v] == e)
        continue;
      if (std::abs(dist[u] - dist[v]) > 1)
        continue;
      const int stamp = r * ec + e;
      for (int a = u; a != r; a = parent_atom[a])
        mark[a] = stamp;
      bool disjoint = true;
      for (int a = v; a != r && disjoint; a = parent_atom[a])
        disjoint = mark[a] != stamp;
      if (!disjoint)
        continue;
      Candidate c { dist[u] + dist[v] + 1, EdgeSet(words, 0) };
      set_bit(c.edges, e);
      for (int a = u; a != r; a = parent_atom[a])
        set_bit(c.edges, parent_edge[a]);
      for (int a = v; a != r; a = parent_atom[a])
        set_bit(c.edges, parent_edge[a]);
      candidates.push_back(std::move(c));
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate &x, const Candidate &y) {
              if (x.length != y.length)
                return x.length < y.length;
              return x.edges < y.edges;
            });

  std::vector<EdgeSet> basis(ec);
  std::vector<std::uint8_t> has_row(ec, 0);
  const EdgeSet *last = nullptr;
  for (const auto &c: candidates) {
    if (static_cast<int>(chosen.size()) == cyclomatic)
      break;
    if (last != nullptr && *last == c.edges)
      continue;
    last = &c.edges;
    EdgeSet reduced = c.edges;
    for (int hb = highest_bit(reduced); hb >= 0; hb = highest_bit(reduced)) {
      if (!has_row[hb])
        break;
      for (int w = 0; w < words; ++w)
        reduced[w] ^= basis[hb][w];
    }
    const int hb = highest_bit(reduced);
    if (hb < 0)
      continue;
    basis[hb] = std::move(reduced);
    has_row[hb] = 1;
    chosen.push_back(c.edges);
  }
  return chosen;
}

}  // namespace

RingInfo find_sssr(const std::vector<std::vector<Neighbor>> &adj,
                   int num_bonds, std::vector<std::uint8_t> &bond_in_ring) {
  RingInfo info;
  const int n = static_cast<int>(adj.size());
  bond_in_ring.assign(num_bonds, 0);
  if (n == 0)
    return info;

  // Biconnected blocks by Tarjan's algorithm; every smallest ring lies
  // inside a single block.
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<int> edge_stack;
  std::vector<std::vector<int>> blocks;
  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };
  std::vector<Frame> frames;
  int timer = 0;
  for (int s = 0; s < n; ++s) {
    if (disc[s] >= 0)
      continue;
    disc[s] = low[s] = timer++;
    frames.push_back({ s, -1, 0 });
    while (!frames.empty()) {
      Frame &f = frames.back();
      if (f.next < adj[f.atom].size()) {
        const Neighbor nb = adj[f.atom][f.next++];
        if (nb.bond == f.parent_bond)
          continue;
        if (disc[nb.atom] < 0) {
          edge_stack.push_back(nb.bond);
          disc[nb.atom] = low[nb.atom] = timer++;
          frames.push_back({ nb.atom, nb.bond, 0 });
        } else if (disc[nb.atom] < disc[f.atom]) {
          edge_stack.push_back(nb.bond);
          low[f.atom] = std::min(low[f.atom], disc[nb.atom]);
        }
        continue;
      }
      const Frame done = f;
      frames.pop_back();
      if (frames.empty())
        break;
      const int p = frames.back().atom;
      low[p] = std::min(low[p], low[done.atom]);
      if (low[done.atom] >= disc[p]) {
        std::vector<int> block;
        while (true) {
          const int b = edge_stack.back();
          edge_stack.pop_back();
          block.push_back(b);
          if (b == done.parent_bond)
            break;
        }
        if (block.size() > 1)
          blocks.push_back(std::move(block));
      }
    }
  }

  // Global bond ends, recovered from the adjacency lists.
  std::vector<std::array<int, 2>> bond_ends(num_bonds);
  for (int a = 0; a < n; ++a)
    for (const auto &nb: adj[a])
      if (nb.atom > a)
        bond_ends[nb.bond] = { a, nb.atom };

  std::vector<int> local(n, -1);
  for (const auto &block: blocks) {
    std::vector<int> atoms;
    for (int b: block)
      for (int a: bond_ends[b])
        if (local[a] < 0) {
          local[a] = static_cast<int>(atoms.size());
          atoms.push_back(a);
        }
    const int ec = static_cast<int>(block.size());
    std::vector<std::vector<std::array<int, 2>>> ladj(atoms.size());
    std::vector<std::array<int, 2>> ends(ec);
    for (int e = 0; e < ec; ++e) {
      const int x = local[bond_ends[block[e]][0]];
      const int y = local[bond_ends[block[e]][1]];
      ladj[x].push_back({ y, e });
      ladj[y].push_back({ x, e });
      ends[e] = { bond_ends[block[e]][0], bond_ends[block[e]][1] };
    }
    const int cyclomatic = ec - static_cast<int>(atoms.size()) + 1;
    for (const auto &edges: block_cycle_basis(ladj, ec, cyclomatic)) {
      for (int e = 0; e < ec; ++e)
        if (test_bit(edges, e))
          bond_in_ring[block[e]] = 1;
      info.rings.push_back(edges_to_cycle(edges, block, ends));
    }
    for (int a: atoms)
      local[a] = -1;
  }

  std::sort(info.rings.begin(), info.rings.end(),
            [](const std::vector<int> &x, const std::vector<int> &y) {
              if (x.size() != y.size())
                return x.size() < y.size();
              return x < y;
            });
  for (const auto &ring: info.rings)
    info.largest_ring_size = std::max(info.largest_ring_size,
                                      static_cast<int>(ring.size()));
  return info;
}

}  // namespace internal

RingInfo perceive_rings(const Molecule &mol) {
  std::vector<std::vector<Neighbor>> adj(mol.num_atoms());
  for (int i = 0; i < mol.num_atoms(); ++i) {
    auto nbs = mol.neighbors(i);
    adj[i].assign(nbs.begin(), nbs.end());
  }
  std::vector<std::uint8_t> unused;
  return internal::find_sssr(adj, mol.num_bonds(), unused);
}

int cyclomatic_number(const Molecule &mol) {
  if (mol.empty())
    return 0;
  return mol.num_bonds() - mol.num_atoms() + 1;
}

}  // namespace cga
