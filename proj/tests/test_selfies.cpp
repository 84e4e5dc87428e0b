#include <gtest/gtest.h>

#include <cmath>

#include "cga/fmt/selfies.h"
#include "support.h"

namespace cga {
namespace {

TokenSequence tokens(const char *text) { return parse_selfies(text); }

TEST(SelfiesText, RenderParseRoundTrip) {
  const char *text = "[C][=C][Branch1][C][O][Ring1][=N][#C][N+1][NH1]";
  EXPECT_EQ(render_selfies(tokens(text)), text);
  EXPECT_THROW(parse_selfies("[C"), SelfiesError);
  EXPECT_THROW(parse_selfies("C"), SelfiesError);
  EXPECT_THROW(parse_selfies("[Xx]"), SelfiesError);
}

TEST(SelfiesDecode, Examples) {
  EXPECT_EQ(write_smiles(decode(tokens("[C]"))), "C");
  const Molecule ethene = decode(tokens("[C][=C]"));
  ASSERT_EQ(ethene.num_bonds(), 1);
  EXPECT_EQ(ethene.bond(0).order, 2);
  EXPECT_TRUE(decode(TokenSequence {}).empty());
}

TEST(SelfiesDecode, BondOrdersAreClamped) {
  // Oxygen cannot take a triple bond; the request is capped at two.
  EXPECT_EQ(write_smiles(decode(tokens("[C][#O]"))), "C=O");
  EXPECT_EQ(write_smiles(decode(tokens("[F][=C]"))), "CF");
  // Fluorine is saturated after one bond; the chain stops growing there.
  EXPECT_EQ(write_smiles(decode(tokens("[C][F][C]"))), "CF");
}

TEST(SelfiesDecode, BranchesAndRings) {
  // [Branch1][C] opens a one-token branch holding [O]; the chain then
  // continues from the first carbon.
  EXPECT_TRUE(isomorphic(decode(tokens("[C][Branch1][C][O][C]")),
                         parse_smiles("CCO")));
  const Molecule ring = decode(tokens("[C][C][C][C][C][C][Ring1][=Branch1]"));
  EXPECT_EQ(write_smiles(ring), "C1CCCCC1");
  // A branch with nothing left to hold adds nothing.
  EXPECT_EQ(write_smiles(decode(tokens("[C][C][Branch1]"))), "CC");
  // A ring token missing its index reads it as zero: the ring closes onto
  // the neighbouring atom, which raises the existing bond order.
  EXPECT_EQ(write_smiles(decode(tokens("[C][C][Ring1]"))), "C=C");
  EXPECT_EQ(write_smiles(decode(tokens("[C][C][=Ring1]"))), "C#C");
}

TEST(SelfiesDecode, IndexAlphabet) {
  EXPECT_EQ(index_value(Token::atom(Element::kC)), 0);
  EXPECT_EQ(index_value(Token::ring(1)), 1);
  EXPECT_EQ(index_value(Token::branch(1, 2)), 4);
  EXPECT_EQ(index_value(Token::atom(Element::kO)), 9);
  EXPECT_EQ(index_value(Token::atom(Element::kP)), 15);
}

TEST(SelfiesCodec, SmallMolecules) {
  EXPECT_EQ(render_selfies(encode(parse_smiles("C"))), "[C]");
  const TokenSequence eth = encode(parse_smiles("CCO"));
  EXPECT_EQ(eth.size(), 3u);
  EXPECT_TRUE(isomorphic(decode(eth), parse_smiles("CCO")));
}

TEST(SelfiesCodec, RoundTripOnSample) {
  for (const auto &m: test::sample_molecules(1000)) {
    const Molecule back = decode(encode(m));
    ASSERT_TRUE(isomorphic(m, back))
        << write_smiles(m) << " -> " << render_selfies(encode(m));
  }
}

TEST(SelfiesCodec, ChargedAtomsRoundTrip) {
  for (const char *smiles: { "C[B-](C)(C)C", "C[N+](C)(C)C", "CC(=O)[O-]",
                             "[NH4+]", "C[S+](C)C" }) {
    const TokenSequence seq = encode(parse_smiles(smiles));
    EXPECT_TRUE(isomorphic(decode(seq), parse_smiles(smiles)))
        << smiles << " -> " << render_selfies(seq);
  }
  EXPECT_EQ(render_selfies(encode(parse_smiles("[NH4+]"))), "[N+1]");  // four hydrogens is the default
}

TEST(SelfiesDecode, RandomSequencesAreValid) {
  std::vector<Token> alphabet = default_alphabet();
  for (const Token &t: alphabet_from(test::sample_molecules(500)))
    alphabet.push_back(t);
  Rng rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    TokenSequence seq(1 + uniform_index(rng, 50));
    for (auto &t: seq)
      t = alphabet[uniform_index(rng, alphabet.size())];
    const Molecule m = decode(seq);
    ASSERT_TRUE(check_valence(m)) << render_selfies(seq);
    if (!m.empty()) {
      ASSERT_TRUE(isomorphic(parse_smiles(write_smiles(m)), m));
    }
  }
}

TEST(SelfiesAlphabet, DefaultAndDatasetAlphabets) {
  const auto def = default_alphabet();
  EXPECT_EQ(def.size(), 13u);
  const auto mols = test::sample_molecules(200);
  const auto ds = alphabet_from(mols);
  EXPECT_TRUE(std::is_sorted(ds.begin(), ds.end()));
  EXPECT_EQ(std::adjacent_find(ds.begin(), ds.end()), ds.end());
  for (const auto &m: mols)
    for (const Token &t: encode(m))
      EXPECT_TRUE(std::binary_search(ds.begin(), ds.end(), t));
}

TEST(Mutation, TerminalWindow) {
  EXPECT_EQ(terminal_window_start(10, 0.1), 9u);
  EXPECT_EQ(terminal_window_start(1, 0.1), 0u);
  EXPECT_EQ(terminal_window_start(20, 0.1), 18u);
  EXPECT_EQ(terminal_window_start(15, 0.1), 14u);
  // ceil(0.9 L) in exact integer arithmetic, at least one token wide.
  for (std::size_t len = 1; len <= 200; ++len)
    EXPECT_EQ(terminal_window_start(len, 0.1),
              std::min((9 * len + 9) / 10, len - 1))
        << len;
}

TEST(Mutation, ReplaceOnTwoCarbons) {
  const TokenSequence cc = tokens("[C][C]");
  const std::vector<Token> alphabet { Token::atom(Element::kO) };
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const Mutation m = mutate(cc, rng, alphabet);
    if (m.kind != MutationKind::kReplace)
      continue;
    EXPECT_EQ(m.position, 1u);
    EXPECT_EQ(write_smiles(decode(m.tokens)), "CO");
    return;
  }
  FAIL() << "no replacement drawn";
}

TEST(Mutation, SeededMutationsStayLocalAndValid) {
  const TokenSequence seq = encode(parse_smiles(
      "CC(C)Cc1ccc(cc1)C(C)C(=O)NCCc1ccc(O)cc1"));
  const std::size_t len = seq.size();
  const std::size_t start = terminal_window_start(len, 0.1);
  const auto alphabet = default_alphabet();
  int counts[3] = {};
  for (std::uint64_t s = 0; s < 1000; ++s) {
    Rng rng(derive_seed(99, s, 0));
    const Mutation m = mutate(seq, rng, alphabet);
    ++counts[static_cast<int>(m.kind)];
    ASSERT_GE(m.position, start);
    ASSERT_LE(m.position, len);
    const long diff = static_cast<long>(m.tokens.size())
                      - static_cast<long>(len);
    ASSERT_EQ(diff, m.kind == MutationKind::kInsert    ? 1
                    : m.kind == MutationKind::kDelete ? -1
                                                      : 0);
    // Everything before the window is untouched.
    ASSERT_TRUE(std::equal(seq.begin(), seq.begin() + start,
                           m.tokens.begin()));
    ASSERT_TRUE(check_valence(decode(m.tokens)));
  }
  for (int c: counts)
    EXPECT_GT(c, 250);
}

TEST(Mutation, DeleteOnSingleTokenBecomesReplace) {
  const TokenSequence one = tokens("[C]");
  const auto alphabet = default_alphabet();
  for (std::uint64_t s = 0; s < 200; ++s) {
    Rng rng(s);
    const Mutation m = mutate(one, rng, alphabet);
    ASSERT_NE(m.kind, MutationKind::kDelete);
    ASSERT_FALSE(m.tokens.empty());
  }
}

}  // namespace
}  // namespace cga
