#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cga/core/molecule.h"
#include "cga/util/random.h"

namespace cga {

enum class TokenKind : std::uint8_t { kAtom, kBranch, kRing };

/**
 * One SELFIES symbol.
 *
 * Atom tokens request a bond order to the previous atom and may fix the
 * charge and hydrogen count. Branch and ring tokens carry a bond order and
 * the number (1-3) of following tokens read as a base-16 length or offset.
 */
struct Token {
  TokenKind kind = TokenKind::kAtom;
  int bond = 1;
  Element element = Element::kC;
  int charge = 0;
  int hydrogens = -1;  // -1: derived from valence
  int size = 1;

  static Token atom(Element e, int bond = 1, int charge = 0,
                    int hydrogens = -1);
  static Token branch(int size, int bond = 1);
  static Token ring(int size, int bond = 1);

  auto operator<=>(const Token &) const = default;
};

using TokenSequence = std::vector<Token>;

class SelfiesError: public std::runtime_error {
public:
  SelfiesError(std::size_t offset, const std::string &msg)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)),
        offset_(offset) { }

  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

// Bracketed text, e.g. "[C][=C][Ring1]".
std::string to_string(const Token &token);
std::string render_selfies(std::span<const Token> tokens);

// Inverse of render_selfies. Throws SelfiesError on malformed text.
TokenSequence parse_selfies(std::string_view text);

// Throws SelfiesError (offset = atom index) for atoms the alphabet cannot
// express. decode(encode(m)) is isomorphic to m.
TokenSequence encode(const Molecule &mol);

// Total: every sequence decodes to a valence-valid molecule, possibly empty.
Molecule decode(std::span<const Token> tokens);

// Value of a token when read as a base-16 digit after a branch or ring.
int index_value(const Token &token);

// Built-in mutation alphabet used when no dataset is loaded.
std::vector<Token> default_alphabet();

// Every distinct token observed while encoding the molecules, sorted.
// Molecules that cannot be encoded are skipped.
std::vector<Token> alphabet_from(std::span<const Molecule> mols);

enum class MutationKind : std::uint8_t { kReplace, kInsert, kDelete };

struct Mutation {
  TokenSequence tokens;
  MutationKind kind;
  std::size_t position;
};

// First position of the trailing window covering terminal_fraction of a
// sequence of length len (at least one token).
std::size_t terminal_window_start(std::size_t len, double terminal_fraction);

/**
 * Replaces, inserts or deletes one token inside the terminal window, each
 * kind with probability 1/3. Deleting from a one-token sequence becomes a
 * replacement. Requires a non-empty sequence and alphabet.
 */
Mutation mutate(std::span<const Token> tokens, Rng &rng,
                std::span<const Token> alphabet,
                double terminal_fraction = 0.1);

}  // namespace cga
