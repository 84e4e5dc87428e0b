#include "cga/desc/crippen.h"

#include <functional>
#include <initializer_list>

namespace cga {
namespace {

// A tiny pattern language covering the tree-shaped queries of the typing
// table. Hydrogens are not graph atoms, so "heavy" is implied everywhere and
// H / X constraints read the hydrogen count.
struct Pred {
  std::function<bool(const Molecule &, int)> f;

  bool operator()(const Molecule &m, int a) const { return f(m, a); }
};

Pred operator&(Pred a, Pred b) {
  return { [a, b](const Molecule &m, int i) { return a(m, i) && b(m, i); } };
}
Pred operator|(Pred a, Pred b) {
  return { [a, b](const Molecule &m, int i) { return a(m, i) || b(m, i); } };
}
Pred operator!(Pred a) {
  return { [a](const Molecule &m, int i) { return !a(m, i); } };
}

Pred any() {
  return { [](const Molecule &, int) { return true; } };
}
Pred el(Element e) {  // #n
  return { [e](const Molecule &m, int i) { return m.atom(i).element == e; } };
}
Pred ali() {  // A
  return { [](const Molecule &m, int i) { return !m.atom(i).aromatic; } };
}
Pred aro() {  // a
  return { [](const Molecule &m, int i) { return m.atom(i).aromatic; } };
}
Pred ali(Element e) { return el(e) & ali(); }  // uppercase symbol
Pred aro(Element e) { return el(e) & aro(); }  // lowercase symbol
Pred h(int n) {
  return { [n](const Molecule &m, int i) { return m.total_hydrogens(i) == n; } };
}
Pred x(int n) {
  return { [n](const Molecule &m, int i) {
    return m.degree(i) + m.total_hydrogens(i) == n;
  } };
}
Pred charge(int c) {
  return { [c](const Molecule &m, int i) {
    return m.atom(i).formal_charge == c;
  } };
}
Pred positive() {
  return { [](const Molecule &m, int i) { return m.atom(i).formal_charge > 0; } };
}
Pred negative() {
  return { [](const Molecule &m, int i) { return m.atom(i).formal_charge < 0; } };
}

enum class Bd { kDefault, kSingle, kDouble, kTriple, kAromatic };

bool bond_ok(Bd q, int code) {
  switch (q) {
  case Bd::kDefault:
    return code == 1 || code == 4;
  case Bd::kSingle:
    return code == 1;
  case Bd::kDouble:
    return code == 2;
  case Bd::kTriple:
    return code == 3;
  case Bd::kAromatic:
    return code == 4;
  }
  return false;
}

struct Edge;

struct Node {
  Pred atom;
  std::vector<Edge> nbrs;
};

struct Edge {
  Bd bond;
  Node node;
};

Node q(Pred atom, std::initializer_list<Edge> nbrs = {}) {
  return { std::move(atom), nbrs };
}
Edge s(Node n) { return { Bd::kDefault, std::move(n) }; }   // implicit bond
Edge s(Pred p) { return s(q(std::move(p))); }
Edge sg(Pred p) { return { Bd::kSingle, q(std::move(p)) }; }  // -
Edge db(Node n) { return { Bd::kDouble, std::move(n) }; }    // =
Edge db(Pred p) { return db(q(std::move(p))); }
Edge tb(Pred p) { return { Bd::kTriple, q(std::move(p)) }; }  // #
Edge ar(Pred p) { return { Bd::kAromatic, q(std::move(p)) }; }  // :

bool match(const Molecule &m, const Node &n, int atom, std::vector<int> &used);

bool match_nbrs(const Molecule &m, const Node &n, std::size_t k, int atom,
                std::vector<int> &used) {
  if (k == n.nbrs.size())
    return true;
  const Edge &e = n.nbrs[k];
  for (const auto &nb: m.neighbors(atom)) {
    if (std::find(used.begin(), used.end(), nb.atom) != used.end())
      continue;
    if (!bond_ok(e.bond, m.bond_type_code(nb.bond)))
      continue;
    const std::size_t mark = used.size();
    if (match(m, e.node, nb.atom, used) && match_nbrs(m, n, k + 1, atom, used))
      return true;
    used.resize(mark);
  }
  return false;
}

bool match(const Molecule &m, const Node &n, int atom, std::vector<int> &used) {
  if (!n.atom(m, atom))
    return false;
  const std::size_t mark = used.size();
  used.push_back(atom);
  if (match_nbrs(m, n, 0, atom, used))
    return true;
  used.resize(mark);
  return false;
}

struct Rule {
  std::string_view type;
  double value;
  Node pattern;
};

const std::vector<Rule> &heavy_rules() {
  static const std::vector<Rule> rules = [] {
    using E = Element;
    const Pred C = ali(E::kC), c = aro(E::kC), N = ali(E::kN),
               O = ali(E::kO), S = ali(E::kS), P = ali(E::kP);
    const Pred A = ali(), a = aro(), heavy = any();
    const Pred halogen = el(E::kF) | el(E::kCl) | el(E::kBr) | el(E::kI);
    const Pred hetero = N | O | P | S | halogen;  // [N,O,P,S,F,Cl,Br,I]
    const Pred nonc_ali = A & !el(E::kC);         // [!C;A;!#1]
    const Pred odd_ali = A & !el(E::kC) & !el(E::kN) & !el(E::kO)
                         & !el(E::kS) & !halogen;  // C13 neighbour
    const Pred odd_ali_p = odd_ali & !el(E::kP);   // C27 neighbour

    return std::vector<Rule> {
      { "C1", 0.1441, q(C & h(4)) },
      { "C1", 0.1441, q(C & h(3), { s(C) }) },
      { "C1", 0.1441, q(C & h(2), { s(C), s(C) }) },
      { "C2", 0.0, q(C & h(1), { s(C), s(C), s(C) }) },
      { "C2", 0.0, q(C, { s(C), s(C), s(C), s(C) }) },
      { "C3", -0.2035, q(C & h(3), { s(hetero) }) },
      { "C3", -0.2035, q(C & h(2) & x(4), { s(hetero), s(A) }) },
      { "C4", -0.2051, q(C & h(1) & x(4), { s(hetero), s(A), s(A) }) },
      { "C4", -0.2051, q(C & h(0) & x(4), { s(hetero), s(A), s(A), s(A) }) },
      { "C5", -0.2783, q(C, { db(nonc_ali) }) },
      { "C6", 0.1551, q(C & h(2), { db(C) }) },
      { "C6", 0.1551, q(C & h(1), { db(C), s(A) }) },
      { "C6", 0.1551, q(C & h(0), { db(C), s(A), s(A) }) },
      { "C6", 0.1551, q(C, { db(C), db(C) }) },
      { "C7", 0.0017, q(C & x(2), { tb(A) }) },
      { "C8", 0.08452, q(C & h(3), { s(c) }) },
      { "C9", -0.1444, q(C & h(3), { s(a) }) },
      { "C10", -0.0516, q(C & h(2) & x(4), { s(a) }) },
      { "C11", 0.1193, q(C & h(1) & x(4), { s(a) }) },
      { "C12", -0.0967, q(C & h(0) & x(4), { s(a) }) },
      { "C13", -0.5443, q(c & h(0), { sg(odd_ali) }) },
      { "C14", 0.0, q(c, { s(el(E::kF)) }) },
      { "C15", 0.245, q(c, { s(el(E::kCl)) }) },
      { "C16", 0.198, q(c, { s(el(E::kBr)) }) },
      { "C17", 0.0, q(c, { s(el(E::kI)) }) },
      { "C18", 0.1581, q(c & h(1)) },
      { "C19", 0.2955, q(c, { ar(a), ar(a), ar(a) }) },
      { "C20", 0.2713, q(c, { ar(a), ar(a), sg(a) }) },
      { "C21", 0.136, q(c, { ar(a), ar(a), sg(C) }) },
      { "C22", 0.4619, q(c, { ar(a), ar(a), sg(N) }) },
      { "C23", 0.5437, q(c, { ar(a), ar(a), sg(O) }) },
      { "C24", 0.1893, q(c, { ar(a), ar(a), sg(S) }) },
      { "C25", -0.8186, q(c, { ar(a), ar(a), db(C | N | O) }) },
      { "C26", 0.264, q(C, { db(C), s(a), s(A) }) },
      { "C26", 0.264, q(C, { db(C), s(c), s(a) }) },
      { "C26", 0.264, q(C & h(1), { db(C), s(a) }) },
      { "C26", 0.264, q(C, { db(c) }) },
      { "C27", 0.2148, q(C & x(4), { s(odd_ali_p) }) },
      { "CS", 0.08129, q(el(E::kC)) },

      { "N1", -1.019, q(N & h(2) & charge(0), { s(A) }) },
      { "N2", -0.7096, q(N & h(1) & charge(0), { s(A), s(A) }) },
      { "N3", -1.027, q(N & h(2) & charge(0), { s(a) }) },
      { "N4", -0.5188, q(N & h(1) & charge(0), { s(heavy), s(a) }) },
      { "N5", 0.08387, q(N & h(1) & charge(0), { db(heavy) }) },
      { "N6", 0.1836, q(N & charge(0), { db(heavy), s(heavy) }) },
      { "N7", -0.3187, q(N & charge(0), { s(A), s(A), s(A) }) },
      { "N8", -0.4458, q(N & charge(0), { s(a), s(heavy), s(A) }) },
      { "N8", -0.4458, q(N & charge(0), { s(a), s(a), s(a) }) },
      { "N9", 0.01508, q(N & charge(0), { tb(A) }) },
      { "N10", -1.95, q(N & positive() & (h(1) | h(2) | h(3))) },
      { "N11", -0.3239, q(aro(E::kN) & charge(0)) },
      { "N12", -1.119, q(aro(E::kN) & positive()) },
      { "N13", -0.3396, q(N & h(0) & positive(), { s(A), s(A), s(A), s(A) }) },
      { "N13", -0.3396, q(N & h(0) & positive(), { db(A), s(A), s(heavy) }) },
      { "N13", -0.3396, q(N & h(0) & positive(),
                          { db(el(E::kC)), db(el(E::kN)) }) },
      { "N14", 0.2887, q(N & positive(), { tb(A) }) },
      { "N14", 0.2887, q(N & negative()) },
      { "N14", 0.2887, q(N & positive(), { db(N & negative()), db(N) }) },
      { "NS", -0.4806, q(el(E::kN)) },

      { "O1", 0.1552, q(aro(E::kO)) },
      { "O2", -0.2893, q(O & (h(1) | h(2))) },
      { "O3", -0.0684, q(O, { s(A), s(A) }) },
      { "O4", -0.4195, q(O, { s(a), s(heavy) }) },
      { "O5", 0.0335, q(O, { db(el(E::kN) | el(E::kO)) }) },
      { "O5", 0.0335, q(O & x(1) & negative(), { s(el(E::kN)) }) },
      { "O6", -0.3339, q(O & x(1) & negative(), { s(el(E::kS)) }) },
      { "O6", -0.3339, q(O & charge(0), { db(el(E::kS) & charge(0)) }) },
      { "O12", -1.326, q(O & charge(-1), { s(q(C, { db(O) })) }) },
      { "O7", -1.189, q(O & x(1) & negative(),
                        { s((!el(E::kN)) & (!el(E::kS))) }) },
      { "O8", 0.1788, q(O, { db(c) }) },
      { "O9", -0.1526, q(O, { db(q(C & h(1), { s(C) })) }) },
      { "O9", -0.1526, q(O, { db(q(C, { s(C), s(A) })) }) },
      { "O9", -0.1526, q(O, { db(q(C & h(1), { s(N | O) })) }) },
      { "O9", -0.1526, q(O, { db(C & h(2)) }) },
      { "O9", -0.1526, q(O, { db(q(C & x(2), { db(O) })) }) },
      { "O10", 0.1129, q(O, { db(q(C & h(1), { s(c) })) }) },
      { "O10", 0.1129, q(O, { db(q(C, { s(C | c), s(a) })) }) },
      { "O10", 0.1129, q(O, { db(q(C, { s(c), s(A) })) }) },
      { "O11", 0.4833, q(O, { db(q(C, { s(!el(E::kC)), s(!el(E::kC)) })) }) },
      { "OS", -0.1188, q(el(E::kO)) },

      { "F", 0.4202, q(el(E::kF) & charge(0)) },
      { "Cl", 0.6895, q(el(E::kCl) & charge(0)) },
      { "Br", 0.8456, q(el(E::kBr) & charge(0)) },
      { "I", 0.8857, q(el(E::kI) & charge(0)) },
      { "Hal", -2.996, q(halogen & negative()) },
      { "Hal", -2.996, q(el(E::kI) & positive()) },

      { "P", 0.8612, q(el(E::kP)) },
      { "S2", -0.0024, q(S & !charge(0)) },
      { "S2", -0.0024, q(S & charge(0), { db(N | O | P | S) }) },
      { "S1", 0.6482, q(S) },
      { "S3", 0.6237, q(aro(E::kS)) },
      { "Me1", -0.3808, q(el(E::kB)) },
    };
  }();
  return rules;
}

// Hydrogen types depend on the atom carrying the hydrogen.
double hydrogen_value(const Molecule &m, int p) {
  const Atom &atom = m.atom(p);
  if (atom.element == Element::kC || atom.element == Element::kH)
    return 0.123;  // H1
  if (atom.element == Element::kO && !atom.aromatic) {
    // Neighbours of the oxygen besides this hydrogen; extra hydrogens on
    // the oxygen count as "not C, N, O or S".
    bool h2 = m.total_hydrogens(p) > 1;
    bool h3 = false;
    bool h4 = false;
    for (const auto &nb: m.neighbors(p)) {
      const Atom &o = m.atom(nb.atom);
      const int code = m.bond_type_code(nb.bond);
      if (code != 1 && code != 4)
        continue;
      const bool cx4 = o.element == Element::kC && !o.aromatic
                       && m.degree(nb.atom) + m.total_hydrogens(nb.atom) == 4;
      const bool arom_c = o.element == Element::kC && o.aromatic;
      const bool common = !o.aromatic
                          && (o.element == Element::kC || o.element == Element::kN
                              || o.element == Element::kO
                              || o.element == Element::kS);
      if (cx4 || arom_c || !common)
        h2 = true;
      if (o.element == Element::kN)
        h3 = true;
      if (!o.aromatic && (o.element == Element::kO || o.element == Element::kS))
        h4 = true;
      if (o.element == Element::kC && !o.aromatic) {
        for (const auto &nb2: m.neighbors(nb.atom)) {
          if (nb2.atom == p || m.bond_type_code(nb2.bond) != 2)
            continue;
          const Atom &t = m.atom(nb2.atom);
          if (t.element == Element::kC || t.element == Element::kN
              || (!t.aromatic
                  && (t.element == Element::kO || t.element == Element::kS)))
            h4 = true;
        }
      }
    }
    if (h2)
      return -0.2677;
    if (h3)
      return 0.2142;
    if (h4)
      return 0.298;
    return 0.1125;  // HS
  }
  if (atom.element == Element::kN)
    return 0.2142;  // H3, including the NH of aromatic rings
  return -0.2677;   // H2
}

}  // namespace

std::vector<AtomContribution> crippen_contributions(const Molecule &mol) {
  std::vector<AtomContribution> out(mol.num_atoms());
  std::vector<int> used;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    AtomContribution &c = out[i];
    if (mol.atom(i).element == Element::kH) {
      c.type = "HS";
      c.heavy = 0.1125;
    } else {
      for (const Rule &rule: heavy_rules()) {
        used.clear();
        if (match(mol, rule.pattern, i, used)) {
          c.type = rule.type;
          c.heavy = rule.value;
          break;
        }
      }
    }
    c.hydrogens = mol.total_hydrogens(i) * hydrogen_value(mol, i);
  }
  return out;
}

double crippen_logp(const Molecule &mol) {
  double total = 0.0;
  for (const auto &c: crippen_contributions(mol))
    total += c.heavy + c.hydrogens;
  return total;
}

}  // namespace cga
