#include <gtest/gtest.h>

#include "cga/fp/fingerprint.h"
#include "support.h"

namespace cga {
namespace {

Fingerprint from_bits(std::initializer_list<int> bits, int nbits = 64) {
  Fingerprint f(nbits);
  for (int b: bits)
    f.set(b);
  return f;
}

TEST(Fingerprint, MethaneRadiusZeroHasOneBit) {
  EXPECT_EQ(circular_fingerprint(parse_smiles("C"), 0, 2048).popcount(), 1);
}

TEST(Fingerprint, BenzeneHasThreeEnvironments) {
  const Molecule benzene = parse_smiles("c1ccccc1");
  EXPECT_EQ(environment_ids(benzene, 2).size(), 3u);
  const auto env = atom_environments(benzene, 2);
  ASSERT_EQ(env.size(), 3u);
  for (const auto &shell: env)
    for (auto id: shell)
      EXPECT_EQ(id, shell.front());
}

TEST(Fingerprint, NonEmptyMoleculesSetBits) {
  for (const auto &m: test::sample_molecules(200))
    EXPECT_GE(circular_fingerprint(m).popcount(), 1);
}

TEST(Fingerprint, RelabelingInvariance) {
  const auto mols = test::sample_molecules(50);
  Rng rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const Molecule &m = mols[trial % mols.size()];
    ASSERT_EQ(circular_fingerprint(test::shuffled(m, rng)),
              circular_fingerprint(m));
  }
}

TEST(Fingerprint, ParameterValidation) {
  const Molecule m = parse_smiles("CCO");
  EXPECT_THROW(circular_fingerprint(m, -1, 2048), std::invalid_argument);
  EXPECT_THROW(circular_fingerprint(m, 2, 1000), std::invalid_argument);
  EXPECT_THROW(circular_fingerprint(m, 2, 32), std::invalid_argument);
  EXPECT_NO_THROW(circular_fingerprint(m, 3, 64));
}

TEST(Tanimoto, Arithmetic) {
  const Fingerprint a = from_bits({ 1, 2, 3 });
  const Fingerprint b = from_bits({ 2, 3, 4 });
  EXPECT_DOUBLE_EQ(tanimoto(a, b), 0.5);
  EXPECT_DOUBLE_EQ(tanimoto(a, a), 1.0);
  EXPECT_DOUBLE_EQ(tanimoto(from_bits({ 1 }), from_bits({ 2 })), 0.0);
  EXPECT_DOUBLE_EQ(tanimoto(Fingerprint(64), Fingerprint(64)), 1.0);
  EXPECT_THROW(tanimoto(Fingerprint(64), Fingerprint(128)),
               std::invalid_argument);
}

TEST(Tanimoto, RemovingSubstituentLowersSimilarity) {
  const std::pair<const char *, const char *> cases[] = {
    { "Cc1ccccc1", "c1ccccc1" },       { "CCO", "CC" },
    { "CC(=O)Nc1ccccc1", "CC(=O)N" },  { "Oc1ccc(Cl)cc1", "Oc1ccccc1" },
    { "CCCCN", "CCCC" },               { "c1ccc2ccccc2c1C", "c1ccc2ccccc2c1" },
    { "CC(C)(C)O", "CC(C)C" },         { "NC(=O)c1ccncc1", "c1ccncc1" },
    { "CS(=O)(=O)c1ccccc1", "CS(=O)(=O)C" },
    { "FC(F)(F)c1ccccc1", "Fc1ccccc1" },
  };
  for (const auto &[with, without]: cases) {
    const double sim = tanimoto(circular_fingerprint(parse_smiles(with)),
                                circular_fingerprint(parse_smiles(without)));
    EXPECT_LT(sim, 1.0) << with << " vs " << without;
    EXPECT_GT(sim, 0.0) << with << " vs " << without;
  }
}

}  // namespace
}  // namespace cga
