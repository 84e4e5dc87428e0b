#include <gtest/gtest.h>

#include "support.h"

namespace cga {
namespace {

TEST(SmilesParse, Methane) {
  const Molecule m = parse_smiles("C");
  EXPECT_EQ(m.num_atoms(), 1);
  EXPECT_EQ(m.num_bonds(), 0);
  EXPECT_EQ(m.total_hydrogens(0), 4);
}

TEST(SmilesParse, BenzeneIsKekulized) {
  const Molecule m = parse_smiles("c1ccccc1");
  EXPECT_EQ(m.num_atoms(), 6);
  EXPECT_EQ(m.num_bonds(), 6);
  int doubles = 0;
  for (const Bond &b: m.bonds()) {
    EXPECT_TRUE(b.aromatic);
    doubles += b.order == 2;
  }
  EXPECT_EQ(doubles, 3);
  for (int i = 0; i < 6; ++i) {
    EXPECT_TRUE(m.atom(i).aromatic);
    EXPECT_EQ(m.bond_order_sum(i), 3);
  }
}

TEST(SmilesParse, AceticAcid) {
  const Molecule m = parse_smiles("CC(=O)O");
  ASSERT_EQ(m.num_atoms(), 4);
  EXPECT_EQ(m.bond(m.find_bond(1, 2)).order, 2);
  EXPECT_EQ(m.bond(m.find_bond(1, 3)).order, 1);
  EXPECT_EQ(m.atom(2).element, Element::kO);
  EXPECT_EQ(m.total_hydrogens(3), 1);
}

TEST(SmilesParse, BracketAtomsAndCharges) {
  const Molecule m = parse_smiles("C[N+](C)(C)C");
  EXPECT_EQ(m.atom(1).formal_charge, 1);
  EXPECT_EQ(m.total_hydrogens(1), 0);
  const Molecule o = parse_smiles("CC(=O)[O-]");
  EXPECT_EQ(o.atom(3).formal_charge, -1);
  EXPECT_EQ(o.total_hydrogens(3), 0);
  EXPECT_EQ(parse_smiles("c1cc[nH]c1").total_hydrogens(3), 1);
}

TEST(SmilesParse, PercentRingClosures) {
  const Molecule m = parse_smiles("C%10CCCCC%10");
  EXPECT_EQ(m.ring_info().largest_ring_size, 6);
}

struct BadCase {
  const char *smiles;
  SmilesErrorKind kind;
  std::size_t offset;
};

TEST(SmilesParse, ErrorsCarryKindAndOffset) {
  const BadCase cases[] = {
    { "C(", SmilesErrorKind::kSyntax, 2 },
    { "C1CC", SmilesErrorKind::kUnclosedRing, 1 },
    { "C[C@H](O)N", SmilesErrorKind::kUnsupported, 3 },
    { "[13CH4]", SmilesErrorKind::kUnsupported, 1 },
    { "C*C", SmilesErrorKind::kUnsupported, 1 },
    { "CC.O", SmilesErrorKind::kUnsupported, 2 },
    { "C/C=C/C", SmilesErrorKind::kUnsupported, 1 },
  };
  for (const auto &c: cases) {
    SCOPED_TRACE(c.smiles);
    try {
      parse_smiles(c.smiles);
      ADD_FAILURE() << "no error";
    } catch (const SmilesError &e) {
      EXPECT_EQ(e.kind(), c.kind);
      EXPECT_EQ(e.offset(), c.offset);
      EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos);
    }
  }
}

TEST(SmilesParse, ValenceViolationsAreRejected) {
  EXPECT_THROW(parse_smiles("C(C)(C)(C)(C)C"), SmilesError);
  EXPECT_THROW(parse_smiles("O=O=O"), SmilesError);
}

TEST(SmilesParse, ErrorOffsetsStayInsideInput) {
  for (const char *s: { "", "(", ")", "C)", "C==C", "[", "[C", "C1C1C", "c1cc1",
                        "%", "C%1", "Q", "[Xx]", "C(C" }) {
    try {
      parse_smiles(s);
    } catch (const SmilesError &e) {
      EXPECT_LE(e.offset(), std::string(s).size()) << s;
    }
  }
}

TEST(SmilesWrite, Basics) {
  EXPECT_EQ(write_smiles(parse_smiles("C")), "C");
  EXPECT_EQ(write_smiles(Molecule {}), "");
  EXPECT_EQ(smiles_length(parse_smiles("C")), 1u);
  EXPECT_EQ(smiles_length(Molecule {}), 0u);
}

TEST(SmilesWrite, BenzeneSpellingsAgree) {
  const std::string a = write_smiles(parse_smiles("C1=CC=CC=C1"));
  const std::string b = write_smiles(parse_smiles("c1ccccc1"));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, "c1ccccc1");
  EXPECT_EQ(smiles_length(parse_smiles("c1ccccc1")), 8u);
}

TEST(SmilesWrite, RoundTripOnSample) {
  for (const auto &s: test::read_smiles(test::data_path("zinc_sample_5k.smi"),
                                        1000)) {
    const Molecule m = parse_smiles(s);
    const std::string w = write_smiles(m);
    const Molecule back = parse_smiles(w);
    ASSERT_TRUE(isomorphic(m, back)) << s << " -> " << w;
    ASSERT_EQ(write_smiles(back), w) << s;
  }
}

}  // namespace
}  // namespace cga
