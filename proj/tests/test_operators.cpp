#include <gtest/gtest.h>

#include <set>

#include "cga/ga/operators.h"
#include "support.h"

namespace cga {
namespace {

std::multiset<std::string> canonical(const std::vector<Molecule> &mols) {
  std::multiset<std::string> out;
  for (const auto &m: mols)
    out.insert(write_smiles(m));
  return out;
}

TEST(CutSites, AcyclicSingleBonds) {
  const Molecule m = parse_smiles("CC(=O)Nc1ccccc1");
  const auto cuts = acyclic_single_bonds(m);
  EXPECT_EQ(cuts.size(), 3u);  // C-C, C-N, N-c; the C=O bond is not single
  for (int b: cuts) {
    EXPECT_FALSE(m.bond_in_ring(b));
    EXPECT_EQ(m.bond(b).order, 1);
  }
  EXPECT_TRUE(acyclic_single_bonds(parse_smiles("C")).empty());
}

TEST(CutSites, RingCutPairsSplitTheMolecule) {
  // Every pair of benzene bonds splits the ring: 15 pairs.
  EXPECT_EQ(ring_cut_pairs(parse_smiles("c1ccccc1")).size(), 15u);
  // In naphthalene a pair must not leave the other ring holding the halves
  // together; the shared bond pairs with any bond of either ring.
  const Molecule nap = parse_smiles("c1ccc2ccccc2c1");
  for (const auto &[a, b]: ring_cut_pairs(nap)) {
    EXPECT_NE(a, b);
    EXPECT_TRUE(nap.bond_in_ring(a));
    EXPECT_TRUE(nap.bond_in_ring(b));
  }
  EXPECT_TRUE(ring_cut_pairs(parse_smiles("CCCC")).empty());
}

TEST(Crossover, EthaneWithEthane) {
  const Molecule ethane = parse_smiles("CC");
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(s);
    const auto r = crossover_with(CutMode::kNonRing, ethane, ethane, rng, 81);
    ASSERT_EQ(r.children.size(), 4u);
    for (const auto &c: r.children)
      EXPECT_TRUE(isomorphic(c, ethane));
  }
}

TEST(Crossover, ThreeAtomParentsExhaustive) {
  // Cutting both C-C bonds gives fragments {C, C-O} and {C, C-N}; the four
  // cross joins are C+C, C+CN, CO+C and CO+CN.
  const Molecule cco = parse_smiles("CCO");
  const Molecule ccn = parse_smiles("CCN");
  const int cut1 = cco.find_bond(0, 1);
  const int cut2 = ccn.find_bond(0, 1);
  Rng rng(0);
  const auto kids = crossover_at(cco, std::span(&cut1, 1), ccn,
                                 std::span(&cut2, 1), rng, 81);
  EXPECT_EQ(canonical(kids),
            (std::multiset<std::string> { "CC", "CCN", "CCO", "NCCO" }));
}

TEST(Crossover, LengthCapCanRemoveEverything) {
  Rng rng(4);
  const auto r = crossover_with(CutMode::kNonRing, parse_smiles("CCCCO"),
                                parse_smiles("CCCCN"), rng, 1);
  EXPECT_TRUE(r.mode.has_value());
  EXPECT_TRUE(r.children.empty());
}

TEST(Crossover, FallsBackToTheOtherMode) {
  // Acyclic parents cannot be ring-cut, so every call ends as a non-ring cut.
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(s);
    const auto r = crossover(parse_smiles("CCO"), parse_smiles("CCCN"), rng, 81);
    ASSERT_EQ(r.mode, CutMode::kNonRing);
  }
  // Methane offers no cut of either kind.
  Rng rng(1);
  const auto r = crossover(parse_smiles("C"), parse_smiles("CCO"), rng, 81);
  EXPECT_FALSE(r.mode.has_value());
  EXPECT_TRUE(r.children.empty());
}

TEST(Crossover, RingCutRecombinesRings) {
  Rng rng(12);
  const auto r = crossover_with(CutMode::kRing, parse_smiles("Cc1ccccc1"),
                                parse_smiles("OC1CCCCC1"), rng, 81);
  EXPECT_EQ(r.mode, CutMode::kRing);
  EXPECT_LE(r.children.size(), 4u);
  for (const auto &c: r.children)
    EXPECT_FALSE(c.ring_info().rings.empty()) << write_smiles(c);
}

TEST(Crossover, ChildrenAreValidOnSamplePairs) {
  const auto mols = test::sample_molecules(200);
  Rng rng(31);
  std::size_t total = 0;
  for (int k = 0; k < 100; ++k) {
    const Molecule &a = mols[uniform_index(rng, mols.size())];
    const Molecule &b = mols[uniform_index(rng, mols.size())];
    const auto r = crossover(a, b, rng, 81);
    ASSERT_LE(r.children.size(), 4u);
    total += r.children.size();
    for (const auto &c: r.children) {
      ASSERT_TRUE(check_valence(c));
      ASSERT_LE(smiles_length(c), 81u);
      ASSERT_TRUE(isomorphic(parse_smiles(write_smiles(c)), c));
    }
  }
  EXPECT_GT(total, 100u);
}

}  // namespace
}  // namespace cga
