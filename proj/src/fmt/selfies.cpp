#include "cga/fmt/selfies.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "cga/core/canon.h"

namespace cga {
namespace {

constexpr int kMaxSize = 3;

std::string_view bond_prefix(int bond) {
  switch (bond) {
  case 2:
    return "=";
  case 3:
    return "#";
  default:
    return "";
  }
}

// Digits used for branch lengths and ring offsets, by value.
const std::array<Token, 16> &index_tokens() {
  static const std::array<Token, 16> table {
    Token::atom(Element::kC),        Token::ring(1),
    Token::ring(2),                  Token::branch(1),
    Token::branch(1, 2),             Token::branch(1, 3),
    Token::branch(2),                Token::branch(2, 2),
    Token::branch(2, 3),             Token::atom(Element::kO),
    Token::atom(Element::kN),        Token::atom(Element::kN, 2),
    Token::atom(Element::kC, 2),     Token::atom(Element::kC, 3),
    Token::atom(Element::kS),        Token::atom(Element::kP),
  };
  return table;
}

// Bond capacity of an atom token, -1 if the token names an unsupported
// charge state or more hydrogens than the valence allows.
int atom_capacity(const Token &t) {
  const int maxv = max_valence(t.element, t.charge);
  if (maxv < 0)
    return -1;
  return maxv - std::max(t.hydrogens, 0);
}

class Decoder {
public:
  explicit Decoder(std::span<const Token> tokens): tokens_(tokens) { }

  Molecule run() {
    std::size_t pos = 0;
    derive(pos, tokens_.size(), 0, -1);
    close_rings();

    MoleculeBuilder builder;
    for (const Atom &atom: atoms_)
      builder.add_atom(atom);
    for (const auto &e: edges_)
      builder.add_bond(e.a, e.b, static_cast<BondType>(e.order));
    return builder.build();
  }

private:
  struct Edge {
    int a;
    int b;
    int order;
  };
  struct PendingRing {
    int a;
    int b;
    int order;
  };

  int read_index(std::size_t &pos, int digits, std::size_t end) {
    int q = 0;
    for (int i = 0; i < digits; ++i) {
      q *= 16;
      if (pos < end)
        q += index_value(tokens_[pos++]);
    }
    return q;
  }

  int add_atom(const Token &t, int capacity) {
    Atom atom;
    atom.element = t.element;
    atom.formal_charge = t.charge;
    if (t.hydrogens >= 0) {
      atom.explicit_h = t.hydrogens;
      atom.no_implicit = true;
    }
    atoms_.push_back(atom);
    cap_.push_back(capacity);
    used_.push_back(0);
    return static_cast<int>(atoms_.size()) - 1;
  }

  void add_edge(int a, int b, int order) {
    edges_.push_back({ a, b, order });
    used_[a] += order;
    used_[b] += order;
  }

  // Derives tokens [pos, end) hanging off root with the given bond budget.
  // Returns the bond capacity consumed on root itself.
  int derive(std::size_t &pos, std::size_t end, int state, int root) {
    const int origin = root;
    int origin_used = 0;
    auto spend = [&](int amount) {
      state -= amount;
      if (root == origin)
        origin_used += amount;
    };

    while (pos < end && (root < 0 || state > 0)) {
      const Token &t = tokens_[pos++];
      switch (t.kind) {
      case TokenKind::kAtom: {
        const int capacity = atom_capacity(t);
        if (capacity < 0)
          break;
        if (root < 0) {
          root = add_atom(t, capacity);
          state = capacity;
          break;
        }
        const int order = std::min({ t.bond, state, capacity });
        if (order <= 0)
          break;
        const int atom = add_atom(t, capacity);
        add_edge(root, atom, order);
        spend(order);
        root = atom;
        state = capacity - order;
        break;
      }
      case TokenKind::kBranch: {
        if (root < 0 || state <= 1)
          break;
        const int q = read_index(pos, t.size, end);
        const std::size_t branch_end = std::min(end, pos + q + 1);
        const int init = std::min(state - 1, t.bond);
        spend(derive(pos, branch_end, init, root));
        pos = branch_end;
        break;
      }
      case TokenKind::kRing: {
        if (root < 0)
          break;
        const int q = read_index(pos, t.size, end);
        const int order = std::min(t.bond, state);
        rings_.push_back({ root, std::max(0, root - (q + 1)), order });
        spend(order);
        break;
      }
      }
    }
    return origin_used;
  }

  void close_rings() {
    for (const auto &r: rings_) {
      if (r.a == r.b)
        continue;
      int room = std::min({ r.order, cap_[r.a] - used_[r.a],
                            cap_[r.b] - used_[r.b] });
      auto it = std::find_if(edges_.begin(), edges_.end(), [&](const Edge &e) {
        return (e.a == r.a && e.b == r.b) || (e.a == r.b && e.b == r.a);
      });
      if (it != edges_.end()) {
        room = std::min(room, 3 - it->order);
        if (room <= 0)
          continue;
        it->order += room;
        used_[r.a] += room;
        used_[r.b] += room;
      } else if (room > 0) {
        add_edge(r.a, r.b, room);
      }
    }
  }

  std::span<const Token> tokens_;
  std::vector<Atom> atoms_;
  std::vector<int> cap_;
  std::vector<int> used_;
  std::vector<Edge> edges_;
  std::vector<PendingRing> rings_;
};

class Encoder {
public:
  explicit Encoder(const Molecule &mol)
      : mol_(mol), ranks_(canonical_ranks(mol)),
        tr_(canonical_traversal(mol, ranks_)), pos_(mol.num_atoms()) {
    for (std::size_t k = 0; k < tr_.order.size(); ++k)
      pos_[tr_.order[k]] = static_cast<int>(k);
  }

  TokenSequence run() {
    TokenSequence out;
    if (!mol_.empty())
      emit(tr_.order.front(), 1, out);
    return out;
  }

private:
  Token atom_token(int a, int bond) const {
    const Atom &atom = mol_.atom(a);
    if (std::abs(atom.formal_charge) > 2)
      throw SelfiesError(a, "charge outside the token alphabet");
    const int bond_sum = mol_.bond_order_sum(a);
    const int total_h = mol_.total_hydrogens(a);
    auto v = lowest_valence_at_least(atom.element, atom.formal_charge,
                                     bond_sum);
    const bool default_h = v && *v - bond_sum == total_h;
    return Token::atom(atom.element, bond, atom.formal_charge,
                       default_h ? -1 : total_h);
  }

  static void push_index(int q, TokenSequence &out, int atom) {
    int digits = 1;
    while (digits <= kMaxSize && q >= (1 << (4 * digits)))
      ++digits;
    if (digits > kMaxSize)
      throw SelfiesError(atom, "ring or branch too long to encode");
    out.back().size = digits;
    for (int d = digits - 1; d >= 0; --d)
      out.push_back(index_tokens()[(q >> (4 * d)) & 15]);
  }

  void emit(int a, int bond, TokenSequence &out) const {
    out.push_back(atom_token(a, bond));

    std::vector<int> closing;
    for (int b: tr_.ring_bonds[a])
      if (pos_[mol_.bond(b).other(a)] < pos_[a])
        closing.push_back(b);
    std::sort(closing.begin(), closing.end(), [&](int x, int y) {
      return pos_[mol_.bond(x).other(a)] < pos_[mol_.bond(y).other(a)];
    });
    for (int b: closing) {
      out.push_back(Token::ring(1, mol_.bond(b).order));
      push_index(pos_[a] - pos_[mol_.bond(b).other(a)] - 1, out, a);
    }

    const auto &kids = tr_.children[a];
    for (std::size_t i = 0; i + 1 < kids.size(); ++i) {
      const int order = mol_.bond(tr_.parent_bond[kids[i]]).order;
      TokenSequence content;
      emit(kids[i], order, content);
      out.push_back(Token::branch(1, order));
      push_index(static_cast<int>(content.size()) - 1, out, a);
      out.insert(out.end(), content.begin(), content.end());
    }
    if (!kids.empty()) {
      const int last = kids.back();
      emit(last, mol_.bond(tr_.parent_bond[last]).order, out);
    }
  }

  const Molecule &mol_;
  std::vector<int> ranks_;
  Traversal tr_;
  std::vector<int> pos_;
};

bool parse_digits(std::string_view s, std::size_t &i, int &value) {
  const std::size_t start = i;
  value = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9' && i - start < 3)
    value = value * 10 + (s[i++] - '0');
  return i > start;
}

}  // namespace

Token Token::atom(Element e, int bond, int charge, int hydrogens) {
  Token t;
  t.kind = TokenKind::kAtom;
  t.bond = bond;
  t.element = e;
  t.charge = charge;
  t.hydrogens = hydrogens;
  return t;
}

Token Token::branch(int size, int bond) {
  Token t;
  t.kind = TokenKind::kBranch;
  t.bond = bond;
  t.size = size;
  return t;
}

Token Token::ring(int size, int bond) {
  Token t;
  t.kind = TokenKind::kRing;
  t.bond = bond;
  t.size = size;
  return t;
}

std::string to_string(const Token &t) {
  std::string s = "[";
  s += bond_prefix(t.bond);
  switch (t.kind) {
  case TokenKind::kBranch:
    s += "Branch" + std::to_string(t.size);
    break;
  case TokenKind::kRing:
    s += "Ring" + std::to_string(t.size);
    break;
  case TokenKind::kAtom:
    s += element_symbol(t.element);
    if (t.hydrogens >= 0)
      s += "H" + std::to_string(t.hydrogens);
    if (t.charge != 0)
      s += (t.charge > 0 ? "+" : "-") + std::to_string(std::abs(t.charge));
    break;
  }
  return s + "]";
}

std::string render_selfies(std::span<const Token> tokens) {
  std::string s;
  for (const Token &t: tokens)
    s += to_string(t);
  return s;
}

TokenSequence parse_selfies(std::string_view text) {
  TokenSequence out;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t start = i;
    if (text[i] != '[')
      throw SelfiesError(i, "expected '['");
    const std::size_t close = text.find(']', i);
    if (close == std::string_view::npos)
      throw SelfiesError(i, "unterminated token");
    const std::string_view body = text.substr(i + 1, close - i - 1);
    i = close + 1;

    std::size_t k = 0;
    int bond = 1;
    if (k < body.size() && (body[k] == '=' || body[k] == '#'))
      bond = body[k++] == '=' ? 2 : 3;
    const std::string_view rest = body.substr(k);

    auto sized = [&](std::string_view word, TokenKind kind) -> bool {
      if (rest.size() != word.size() + 1 || rest.substr(0, word.size()) != word)
        return false;
      const char d = rest.back();
      if (d < '1' || d > '0' + kMaxSize)
        throw SelfiesError(start, "bad size in token");
      Token t = kind == TokenKind::kBranch ? Token::branch(d - '0', bond)
                                           : Token::ring(d - '0', bond);
      out.push_back(t);
      return true;
    };
    if (sized("Branch", TokenKind::kBranch) || sized("Ring", TokenKind::kRing))
      continue;

    std::optional<Element> element;
    std::size_t j = 0;
    if (rest.size() >= 2)
      element = element_from_symbol(rest.substr(0, 2));
    if (element) {
      j = 2;
    } else if (!rest.empty()) {
      element = element_from_symbol(rest.substr(0, 1));
      j = 1;
    }
    if (!element)
      throw SelfiesError(start, "unknown token");

    int hydrogens = -1;
    if (j < rest.size() && rest[j] == 'H') {
      ++j;
      if (!parse_digits(rest, j, hydrogens))
        throw SelfiesError(start, "missing hydrogen count");
    }
    int charge = 0;
    if (j < rest.size() && (rest[j] == '+' || rest[j] == '-')) {
      const int sign = rest[j++] == '+' ? 1 : -1;
      if (!parse_digits(rest, j, charge))
        throw SelfiesError(start, "missing charge magnitude");
      charge *= sign;
    }
    if (j != rest.size())
      throw SelfiesError(start, "unexpected characters in token");
    Token t = Token::atom(*element, bond, charge, hydrogens);
    if (atom_capacity(t) < 0)
      throw SelfiesError(start, "unsupported charge or hydrogen count");
    out.push_back(t);
  }
  return out;
}

TokenSequence encode(const Molecule &mol) { return Encoder(mol).run(); }

Molecule decode(std::span<const Token> tokens) {
  return Decoder(tokens).run();
}

int index_value(const Token &token) {
  const auto &table = index_tokens();
  for (int v = 0; v < 16; ++v)
    if (table[v] == token)
      return v;
  return 0;
}

std::vector<Token> default_alphabet() {
  return {
    Token::atom(Element::kC),     Token::atom(Element::kC, 2),
    Token::atom(Element::kC, 3),  Token::atom(Element::kN),
    Token::atom(Element::kN, 2),  Token::atom(Element::kO),
    Token::atom(Element::kO, 2),  Token::atom(Element::kF),
    Token::atom(Element::kS),     Token::atom(Element::kCl),
    Token::atom(Element::kBr),    Token::branch(1),
    Token::ring(1),
  };
}

std::vector<Token> alphabet_from(std::span<const Molecule> mols) {
  std::set<Token> seen;
  for (const Molecule &mol: mols) {
    try {
      for (const Token &t: encode(mol))
        seen.insert(t);
    } catch (const SelfiesError &) {
    }
  }
  return { seen.begin(), seen.end() };
}

std::size_t terminal_window_start(std::size_t len, double terminal_fraction) {
  if (len == 0)
    return 0;
  const double edge = (1.0 - terminal_fraction) * static_cast<double>(len);
  const auto start = static_cast<std::size_t>(std::max(0.0, std::ceil(edge - 1e-9)));
  return std::min(start, len - 1);
}

Mutation mutate(std::span<const Token> tokens, Rng &rng,
                std::span<const Token> alphabet, double terminal_fraction) {
  const std::size_t len = tokens.size();
  const std::size_t start = terminal_window_start(len, terminal_fraction);
  auto kind = static_cast<MutationKind>(uniform_index(rng, 3));
  if (kind == MutationKind::kDelete && len == 1)
    kind = MutationKind::kReplace;

  Mutation m { { tokens.begin(), tokens.end() }, kind, 0 };
  switch (kind) {
  case MutationKind::kReplace:
    m.position = start + uniform_index(rng, len - start);
    m.tokens[m.position] = alphabet[uniform_index(rng, alphabet.size())];
    break;
  case MutationKind::kInsert:
    m.position = start + uniform_index(rng, len - start + 1);
    m.tokens.insert(m.tokens.begin() + m.position,
                    alphabet[uniform_index(rng, alphabet.size())]);
    break;
  case MutationKind::kDelete:
    m.position = start + uniform_index(rng, len - start);
    m.tokens.erase(m.tokens.begin() + m.position);
    break;
  }
  return m;
}

}  // namespace cga
