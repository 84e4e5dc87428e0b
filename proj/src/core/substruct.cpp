#include <algorithm>
#include <deque>
#include <vector>

#include "cga/core/scaffold.h"

namespace cga {
namespace {

// Backtracking matcher over a BFS ordering of the query atoms; each query
// atom after the first is anchored on an already mapped neighbour.
class Matcher {
public:
  Matcher(const Molecule &target, const Molecule &query, bool exact)
      : target_(target), query_(query), exact_(exact),
        map_(query.num_atoms(), -1), used_(target.num_atoms(), 0) {
    const int nq = query.num_atoms();
    int start = 0;
    for (int i = 1; i < nq; ++i)
      if (query.degree(i) > query.degree(start))
        start = i;
    std::vector<std::uint8_t> seen(nq, 0);
    std::deque<int> queue { start };
    seen[start] = 1;
    anchor_.assign(nq, -1);
    while (!queue.empty()) {
      int a = queue.front();
      queue.pop_front();
      order_.push_back(a);
      for (const auto &nb: query.neighbors(a)) {
        if (!seen[nb.atom]) {
          seen[nb.atom] = 1;
          anchor_[nb.atom] = a;
          queue.push_back(nb.atom);
        }
      }
    }
  }

  bool run() { return extend(0); }

private:
  bool atom_ok(int q, int t) const {
    const Atom &qa = query_.atom(q);
    const Atom &ta = target_.atom(t);
    if (qa.element != ta.element || qa.aromatic != ta.aromatic)
      return false;
    if (exact_) {
      return qa.formal_charge == ta.formal_charge
             && query_.total_hydrogens(q) == target_.total_hydrogens(t)
             && query_.degree(q) == target_.degree(t);
    }
    return target_.degree(t) >= query_.degree(q);
  }

  bool bonds_ok(int q, int t) const {
    for (const auto &nb: query_.neighbors(q)) {
      const int mapped = map_[nb.atom];
      if (mapped < 0)
        continue;
      const int tb = target_.find_bond(t, mapped);
      if (tb < 0
          || target_.bond_type_code(tb) != query_.bond_type_code(nb.bond))
        return false;
    }
    return true;
  }

  bool try_pair(std::size_t k, int q, int t) {
    if (used_[t] || !atom_ok(q, t) || !bonds_ok(q, t))
      return false;
    map_[q] = t;
    used_[t] = 1;
    if (extend(k + 1))
      return true;
    map_[q] = -1;
    used_[t] = 0;
    return false;
  }

  bool extend(std::size_t k) {
    if (k == order_.size())
      return true;
    const int q = order_[k];
    if (anchor_[q] < 0) {
      for (int t = 0; t < target_.num_atoms(); ++t)
        if (try_pair(k, q, t))
          return true;
      return false;
    }
    for (const auto &nb: target_.neighbors(map_[anchor_[q]]))
      if (try_pair(k, q, nb.atom))
        return true;
    return false;
  }

  const Molecule &target_;
  const Molecule &query_;
  bool exact_;
  std::vector<int> order_;
  std::vector<int> anchor_;
  std::vector<int> map_;
  std::vector<std::uint8_t> used_;
};

}  // namespace

bool substructure_contains(const Molecule &haystack, const Molecule &needle) {
  if (needle.empty())
    return true;
  if (needle.num_atoms() > haystack.num_atoms()
      || needle.num_bonds() > haystack.num_bonds())
    return false;
  return Matcher(haystack, needle, false).run();
}

bool isomorphic(const Molecule &a, const Molecule &b) {
  if (a.num_atoms() != b.num_atoms() || a.num_bonds() != b.num_bonds())
    return false;
  if (a.empty())
    return true;
  return Matcher(a, b, true).run();
}

}  // namespace cga
