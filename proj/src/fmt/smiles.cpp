#include "cga/fmt/smiles.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cga/core/canon.h"

namespace cga {
namespace {

struct ParsedAtom {
  Atom atom;
  std::size_t offset;
  bool bracket_h_given = false;
};

struct ParsedBond {
  int a;
  int b;
  BondType type;
};

struct RingOpen {
  int atom;
  std::optional<BondType> bond;
  std::size_t offset;
};

[[noreturn]] void fail(SmilesErrorKind kind, std::size_t offset,
                       const std::string &msg) {
  throw SmilesError(kind, offset, msg);
}

class Parser {
public:
  explicit Parser(std::string_view s): s_(s) { }

  Molecule parse() {
    if (s_.empty())
      fail(SmilesErrorKind::kSyntax, 0, "empty SMILES");

    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      switch (c) {
      case '(':
        if (prev_ < 0)
          fail(SmilesErrorKind::kSyntax, pos_, "branch before first atom");
        if (pending_)
          fail(SmilesErrorKind::kSyntax, pos_, "bond symbol before branch");
        branches_.push_back(prev_);
        expect_atom_ = true;
        ++pos_;
        break;
      case ')':
        if (branches_.empty())
          fail(SmilesErrorKind::kSyntax, pos_, "unmatched ')'");
        if (pending_ || expect_atom_)
          fail(SmilesErrorKind::kSyntax, pos_, "empty branch or dangling bond");
        prev_ = branches_.back();
        branches_.pop_back();
        ++pos_;
        break;
      case '-':
      case '=':
      case '#':
      case ':':
        if (prev_ < 0)
          fail(SmilesErrorKind::kSyntax, pos_, "bond before first atom");
        if (pending_)
          fail(SmilesErrorKind::kSyntax, pos_, "consecutive bond symbols");
        pending_ = c == '-'   ? BondType::kSingle
                   : c == '=' ? BondType::kDouble
                   : c == '#' ? BondType::kTriple
                              : BondType::kAromatic;
        pending_offset_ = pos_;
        ++pos_;
        break;
      case '$':
        fail(SmilesErrorKind::kUnsupported, pos_, "quadruple bond");
      case '/':
      case '\\':
        fail(SmilesErrorKind::kUnsupported, pos_, "bond stereo marker");
      case '.':
        fail(SmilesErrorKind::kUnsupported, pos_, "multi-fragment SMILES");
      case '*':
        fail(SmilesErrorKind::kUnsupported, pos_, "wildcard atom");
      case '[':
        bracket_atom();
        break;
      case '%':
        ring_closure();
        break;
      default:
        if (std::isdigit(static_cast<unsigned char>(c)))
          ring_closure();
        else
          organic_atom();
      }
    }

    if (pending_)
      fail(SmilesErrorKind::kSyntax, pending_offset_, "dangling bond symbol");
    if (!branches_.empty())
      fail(SmilesErrorKind::kSyntax, s_.size(), "unclosed branch");
    if (!rings_.empty())
      fail(SmilesErrorKind::kUnclosedRing, rings_.begin()->second.offset,
           "unclosed ring bond " + std::to_string(rings_.begin()->first));

    return finish();
  }

private:
  void add_atom(const Atom &atom, std::size_t offset, bool h_given) {
    const int idx = static_cast<int>(atoms_.size());
    atoms_.push_back({ atom, offset, h_given });
    if (prev_ >= 0) {
      BondType type = pending_.value_or(default_bond(prev_, idx));
      bonds_.push_back({ prev_, idx, type });
    }
    pending_.reset();
    prev_ = idx;
    expect_atom_ = false;
  }

  BondType default_bond(int a, int b) const {
    return atoms_[a].atom.aromatic && atoms_[b].atom.aromatic
               ? BondType::kAromatic
               : BondType::kSingle;
  }

  bool bonded(int a, int b) const {
    return std::any_of(bonds_.begin(), bonds_.end(), [&](const ParsedBond &pb) {
      return (pb.a == a && pb.b == b) || (pb.a == b && pb.b == a);
    });
  }

  void ring_closure() {
    const std::size_t start = pos_;
    if (prev_ < 0 || expect_atom_)
      fail(SmilesErrorKind::kSyntax, pos_, "ring bond without atom");
    int num;
    if (s_[pos_] == '%') {
      if (pos_ + 2 >= s_.size() || !std::isdigit((unsigned char)s_[pos_ + 1])
          || !std::isdigit((unsigned char)s_[pos_ + 2]))
        fail(SmilesErrorKind::kSyntax, pos_, "malformed %nn ring bond");
      num = (s_[pos_ + 1] - '0') * 10 + (s_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      num = s_[pos_] - '0';
      ++pos_;
    }

    auto it = rings_.find(num);
    if (it == rings_.end()) {
      rings_[num] = { prev_, pending_, start };
      pending_.reset();
      return;
    }
    const RingOpen open = it->second;
    rings_.erase(it);
    if (open.atom == prev_ || bonded(open.atom, prev_))
      fail(SmilesErrorKind::kSyntax, start, "duplicate ring bond");
    if (open.bond && pending_ && *open.bond != *pending_)
      fail(SmilesErrorKind::kSyntax, start, "conflicting ring bond symbols");
    BondType type = pending_ ? *pending_
                    : open.bond ? *open.bond
                                : default_bond(open.atom, prev_);
    bonds_.push_back({ open.atom, prev_, type });
    pending_.reset();
  }

  void organic_atom() {
    const std::size_t start = pos_;
    const char c = s_[pos_];
    Atom atom;
    std::optional<Element> el;
    if (c == 'C' && pos_ + 1 < s_.size() && s_[pos_ + 1] == 'l') {
      el = Element::kCl;
      pos_ += 2;
    } else if (c == 'B' && pos_ + 1 < s_.size() && s_[pos_ + 1] == 'r') {
      el = Element::kBr;
      pos_ += 2;
    } else {
      switch (c) {
      case 'B': el = Element::kB; break;
      case 'C': el = Element::kC; break;
      case 'N': el = Element::kN; break;
      case 'O': el = Element::kO; break;
      case 'P': el = Element::kP; break;
      case 'S': el = Element::kS; break;
      case 'F': el = Element::kF; break;
      case 'I': el = Element::kI; break;
      case 'b': el = Element::kB; atom.aromatic = true; break;
      case 'c': el = Element::kC; atom.aromatic = true; break;
      case 'n': el = Element::kN; atom.aromatic = true; break;
      case 'o': el = Element::kO; atom.aromatic = true; break;
      case 'p': el = Element::kP; atom.aromatic = true; break;
      case 's': el = Element::kS; atom.aromatic = true; break;
      default:
        fail(SmilesErrorKind::kSyntax, pos_,
             std::string("unexpected character '") + c + "'");
      }
      ++pos_;
    }
    atom.element = *el;
    add_atom(atom, start, false);
  }

  void bracket_atom() {
    const std::size_t start = pos_;
    ++pos_;  // '['
    auto at_end = [&]() { return pos_ >= s_.size(); };
    if (!at_end() && std::isdigit((unsigned char)s_[pos_]))
      fail(SmilesErrorKind::kUnsupported, pos_, "isotope label");

    Atom atom;
    if (at_end())
      fail(SmilesErrorKind::kSyntax, start, "unterminated bracket atom");
    const char c = s_[pos_];
    std::string symbol;
    if (std::islower((unsigned char)c)) {
      // Aromatic symbols; two-letter aromatic elements are outside the subset.
      if (pos_ + 1 < s_.size() && std::islower((unsigned char)s_[pos_ + 1])
          && (std::string_view(s_.substr(pos_, 2)) == "se"
              || s_.substr(pos_, 2) == "as"))
        fail(SmilesErrorKind::kUnsupported, pos_, "unsupported element");
      symbol = std::string(1, static_cast<char>(std::toupper(c)));
      atom.aromatic = true;
      ++pos_;
    } else if (std::isupper((unsigned char)c)) {
      symbol = std::string(1, c);
      ++pos_;
      if (!at_end() && std::islower((unsigned char)s_[pos_])) {
        std::string two = symbol + s_[pos_];
        if (element_from_symbol(two)) {
          symbol = two;
          ++pos_;
        } else if (!element_from_symbol(symbol)) {
          fail(SmilesErrorKind::kUnsupported, start + 1,
               "unsupported element " + two);
        }
      }
    } else if (c == '*') {
      fail(SmilesErrorKind::kUnsupported, pos_, "wildcard atom");
    } else {
      fail(SmilesErrorKind::kSyntax, pos_, "expected element symbol");
    }

    auto el = element_from_symbol(symbol);
    if (!el)
      fail(SmilesErrorKind::kUnsupported, start + 1,
           "unsupported element " + symbol);
    if (atom.aromatic && !can_be_aromatic(*el))
      fail(SmilesErrorKind::kSyntax, start + 1,
           "element cannot be aromatic: " + symbol);
    atom.element = *el;

    if (!at_end() && s_[pos_] == '@')
      fail(SmilesErrorKind::kUnsupported, pos_, "chirality marker");

    bool h_given = false;
    if (!at_end() && s_[pos_] == 'H') {
      ++pos_;
      h_given = true;
      int h = 1;
      if (!at_end() && std::isdigit((unsigned char)s_[pos_])) {
        h = s_[pos_] - '0';
        ++pos_;
      }
      atom.explicit_h = h;
    }

    if (!at_end() && (s_[pos_] == '+' || s_[pos_] == '-')) {
      const char sign = s_[pos_];
      const std::size_t charge_at = pos_;
      ++pos_;
      int mag = 1;
      if (!at_end() && std::isdigit((unsigned char)s_[pos_])) {
        mag = s_[pos_] - '0';
        ++pos_;
      } else {
        while (!at_end() && s_[pos_] == sign) {
          ++mag;
          ++pos_;
        }
      }
      if (mag > 2)
        fail(SmilesErrorKind::kUnsupported, charge_at,
             "formal charge beyond +/-2");
      atom.formal_charge = sign == '+' ? mag : -mag;
    }

    if (!at_end() && s_[pos_] == ':')
      fail(SmilesErrorKind::kUnsupported, pos_, "atom class");
    if (at_end() || s_[pos_] != ']')
      fail(SmilesErrorKind::kSyntax, at_end() ? s_.size() : pos_,
           "expected ']'");
    ++pos_;

    atom.no_implicit = true;
    add_atom(atom, start, h_given);
  }

  Molecule finish() {
    // Fold explicit hydrogen atoms into their heavy neighbour.
    const int n = static_cast<int>(atoms_.size());
    std::vector<int> degree(n, 0);
    for (const auto &b: bonds_) {
      ++degree[b.a];
      ++degree[b.b];
    }
    std::vector<std::uint8_t> drop(n, 0);
    for (const auto &b: bonds_) {
      for (auto [h, heavy]: { std::pair { b.a, b.b }, std::pair { b.b, b.a } }) {
        const Atom &ha = atoms_[h].atom;
        if (ha.element == Element::kH && ha.formal_charge == 0
            && ha.explicit_h == 0 && degree[h] == 1
            && atoms_[heavy].atom.element != Element::kH
            && b.type == BondType::kSingle) {
          drop[h] = 1;
          atoms_[heavy].atom.explicit_h += 1;
        }
      }
    }

    MoleculeBuilder builder;
    std::vector<int> remap(n, -1);
    std::vector<std::size_t> offsets;
    for (int i = 0; i < n; ++i) {
      if (drop[i])
        continue;
      remap[i] = builder.add_atom(atoms_[i].atom);
      offsets.push_back(atoms_[i].offset);
    }
    for (const auto &b: bonds_) {
      if (drop[b.a] || drop[b.b])
        continue;
      builder.add_bond(remap[b.a], remap[b.b], b.type);
    }

    try {
      return builder.build();
    } catch (const MoleculeError &e) {
      const std::size_t offset = e.atom() >= 0 ? offsets[e.atom()] : 0;
      SmilesErrorKind kind = SmilesErrorKind::kValence;
      switch (e.kind()) {
      case MoleculeErrorKind::kKekulize:
      case MoleculeErrorKind::kAromaticity:
        kind = SmilesErrorKind::kKekulize;
        break;
      case MoleculeErrorKind::kDisconnected:
        kind = SmilesErrorKind::kUnsupported;
        break;
      case MoleculeErrorKind::kBadBond:
        kind = SmilesErrorKind::kSyntax;
        break;
      case MoleculeErrorKind::kValence:
        kind = SmilesErrorKind::kValence;
        break;
      }
      throw SmilesError(kind, offset, e.what());
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int prev_ = -1;
  bool expect_atom_ = false;
  std::optional<BondType> pending_;
  std::size_t pending_offset_ = 0;
  std::vector<int> branches_;
  std::map<int, RingOpen> rings_;
  std::vector<ParsedAtom> atoms_;
  std::vector<ParsedBond> bonds_;
};

class Writer {
public:
  explicit Writer(const Molecule &mol)
      : mol_(mol), ranks_(canonical_ranks(mol)),
        t_(canonical_traversal(mol, ranks_)),
        digit_of_bond_(mol.num_bonds(), 0) { }

  std::string write() {
    if (mol_.empty())
      return {};
    emit(t_.order.front());
    return std::move(out_);
  }

private:
  void emit(int a) {
    out_ += atom_symbol(a);

    std::vector<int> released;
    for (int b: t_.ring_bonds[a]) {
      int digit = digit_of_bond_[b];
      if (digit > 0) {
        put_digit(digit);
        released.push_back(digit);
      } else {
        digit = 1;
        while (used_[digit])
          ++digit;
        used_[digit] = true;
        digit_of_bond_[b] = digit;
        const Bond &bond = mol_.bond(b);
        out_ += bond_symbol(b, bond.begin, bond.end);
        put_digit(digit);
      }
    }
    for (int d: released)
      used_[d] = false;

    const auto &children = t_.children[a];
    for (std::size_t k = 0; k < children.size(); ++k) {
      const int c = children[k];
      const bool branch = k + 1 < children.size();
      if (branch)
        out_ += '(';
      out_ += bond_symbol(t_.parent_bond[c], a, c);
      emit(c);
      if (branch)
        out_ += ')';
    }
  }

  void put_digit(int d) {
    if (d < 10) {
      out_ += static_cast<char>('0' + d);
    } else {
      out_ += '%';
      out_ += static_cast<char>('0' + d / 10);
      out_ += static_cast<char>('0' + d % 10);
    }
  }

  std::string bond_symbol(int b, int x, int y) const {
    const Bond &bond = mol_.bond(b);
    if (bond.aromatic)
      return {};
    switch (bond.order) {
    case 2:
      return "=";
    case 3:
      return "#";
    default:
      return mol_.atom(x).aromatic && mol_.atom(y).aromatic ? "-" : "";
    }
  }

  // Whether a bare organic-subset symbol re-parses to this atom.
  bool bare_ok(int a) const {
    const Atom &atom = mol_.atom(a);
    if (!in_organic_subset(atom.element) || atom.formal_charge != 0)
      return false;
    const int h = mol_.total_hydrogens(a);
    if (!atom.aromatic) {
      const int sum = mol_.bond_order_sum(a);
      auto v = lowest_valence_at_least(atom.element, 0, sum);
      return v && *v - sum == h;
    }
    int sum1 = 0;
    bool has_pi = false;
    for (const auto &nb: mol_.neighbors(a)) {
      const Bond &bond = mol_.bond(nb.bond);
      sum1 += bond.aromatic ? 1 : bond.order;
      has_pi = has_pi || (bond.aromatic && bond.order == 2);
    }
    auto v = lowest_valence_at_least(atom.element, 0, sum1);
    if (!v)
      return false;
    const bool pred_pi = *v - sum1 >= 1;
    if (pred_pi != has_pi)
      return false;
    const int filled = sum1 + (pred_pi ? 1 : 0);
    auto v2 = lowest_valence_at_least(atom.element, 0, filled);
    return v2 && *v2 - filled == h;
  }

  std::string atom_symbol(int a) const {
    const Atom &atom = mol_.atom(a);
    std::string sym(element_symbol(atom.element));
    if (atom.aromatic)
      sym[0] = static_cast<char>(std::tolower(sym[0]));
    if (bare_ok(a))
      return sym;
    std::string out = "[" + sym;
    const int h = mol_.total_hydrogens(a);
    if (h > 0) {
      out += 'H';
      if (h > 1)
        out += std::to_string(h);
    }
    if (atom.formal_charge != 0) {
      out += atom.formal_charge > 0 ? '+' : '-';
      if (std::abs(atom.formal_charge) > 1)
        out += std::to_string(std::abs(atom.formal_charge));
    }
    out += ']';
    return out;
  }

  const Molecule &mol_;
  std::vector<int> ranks_;
  Traversal t_;
  std::vector<int> digit_of_bond_;
  std::array<bool, 100> used_ {};
  std::string out_;
};

}  // namespace

Molecule parse_smiles(std::string_view smiles) {
  return Parser(smiles).parse();
}

std::string write_smiles(const Molecule &mol) { return Writer(mol).write(); }

std::size_t smiles_length(const Molecule &mol) {
  return write_smiles(mol).size();
}

}  // namespace cga
