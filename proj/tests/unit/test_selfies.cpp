//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <random>

#include <gtest/gtest.h>

#include "isomorphism.hpp"
#include "molbench/error.hpp"
#include "molbench/selfies.hpp"
#include "molbench/smiles.hpp"
#include "random_molecules.hpp"

namespace molbench {
namespace {

using testing::isomorphic;

TEST(TokenizeSelfies, Examples) {
  EXPECT_EQ(tokenize_selfies("[C][=C]").size(), 2u);
  EXPECT_EQ(tokenize_selfies("").size(), 0u);
  try {
    tokenize_selfies("[C]X[C]");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kStrayCharacter);
    EXPECT_EQ(e.position(), 3u);
  }
}

TEST(TokenizeSelfies, KindFromText) {
  EXPECT_EQ(make_selfies_token("[C]").kind, SelfiesTokenKind::kAtom);
  EXPECT_EQ(make_selfies_token("[=C]").kind, SelfiesTokenKind::kBondedAtom);
  EXPECT_EQ(make_selfies_token("[Ring1]").kind, SelfiesTokenKind::kRing);
  EXPECT_EQ(make_selfies_token("[Branch2]").kind, SelfiesTokenKind::kBranch);
  EXPECT_EQ(make_selfies_token("[Xyz]").kind, SelfiesTokenKind::kAtom);
}

TEST(TokenizeSelfies, IndexAlphabet) {
  EXPECT_EQ(selfies_index_code("[C]"), 0);
  EXPECT_EQ(selfies_index_code("[Ring1]"), 1);
  EXPECT_EQ(selfies_index_code("[Ring2]"), 2);
  EXPECT_EQ(selfies_index_code("[Branch1]"), 3);
  EXPECT_EQ(selfies_index_code("[=Branch1]"), 4);
  EXPECT_EQ(selfies_index_code("[O]"), 9);
  EXPECT_EQ(selfies_index_code("[P]"), 15);
  EXPECT_EQ(selfies_index_code("[=O]"), 0);
}

TEST(DecodeSelfies, Examples) {
  const MolGraph ethanol = decode_selfies_string("[C][C][O]");
  EXPECT_TRUE(isomorphic(ethanol, parse_smiles("CCO")));
  const MolGraph ethene = decode_selfies_string("[C][=C]");
  EXPECT_TRUE(isomorphic(ethene, parse_smiles("C=C")));
  EXPECT_TRUE(isomorphic(decode_selfies_string("[C][C][Branch1][C][O][C]"), parse_smiles("CC(O)C")));
  EXPECT_TRUE(isomorphic(decode_selfies_string("[C][C][C][C][C][C][Ring1][=Branch1]"),
                         parse_smiles("C1CCCCC1")));
}

TEST(DecodeSelfies, CapsBondOrderAtRemainingValence) {
  EXPECT_TRUE(isomorphic(decode_selfies_string("[O][#C]"), parse_smiles("O=C")));
  EXPECT_TRUE(isomorphic(decode_selfies_string("[C][O][#C]"), parse_smiles("COC")));
  EXPECT_TRUE(isomorphic(decode_selfies_string("[F][F][C]"), parse_smiles("FF")));
}

TEST(DecodeSelfies, EmptyStreamIsAnError) {
  try {
    decode_selfies(SelfiesStream {});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyStream);
  }
}

TEST(DecodeSelfies, UnknownTokensAreNoOps) {
  EXPECT_TRUE(isomorphic(decode_selfies_string("[C][Xyz][O]"), parse_smiles("CO")));
}

TEST(DecodeSelfies, RandomStreamsAreValidAndDeterministic) {
  static const std::vector<std::string> kAlphabet = {
    "[C]", "[=C]", "[#C]", "[N]", "[=N]", "[#N]", "[O]", "[=O]", "[S]", "[=S]", "[F]", "[Cl]",
    "[Br]", "[P]", "[=P]", "[B]", "[I]", "[O-1]", "[N+1]", "[=N+1]", "[NH1]", "[Ring1]", "[Ring2]",
    "[=Ring1]", "[#Ring1]", "[Branch1]", "[Branch2]", "[Branch3]", "[=Branch1]", "[#Branch2]",
    "[nop]", "[Xyz]", "[C@@H1]", "[\\C]", "[/C]",
  };
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> pick(0, kAlphabet.size() - 1);
  std::uniform_int_distribution<int> length(1, 50);
  for (int trial = 0; trial < 2000; ++trial) {
    SelfiesStream s;
    for (int k = length(rng); k > 0; --k)
      s.tokens.push_back(make_selfies_token(kAlphabet[pick(rng)]));
    const MolGraph g = decode_selfies(s);
    ASSERT_TRUE(is_valid(g)) << s.str();
    const MolGraph again = decode_selfies(s);
    EXPECT_EQ(canonical_smiles(g), canonical_smiles(again));
  }
}

TEST(EncodeSelfies, Examples) {
  EXPECT_EQ(encode_selfies_string(parse_smiles("CCO")), "[C][C][O]");
  const MolGraph benzene = parse_smiles("c1ccccc1");
  EXPECT_TRUE(isomorphic(decode_selfies_string(encode_selfies_string(benzene)), kekulize(benzene)));
  try {
    encode_selfies(MolGraph {});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotEncodable);
  }
}

TEST(EncodeSelfies, RejectsInvalidGraphs) {
  EXPECT_THROW(encode_selfies(parse_smiles("C(C)(C)(C)(C)C")), Error);
}

TEST(EncodeSelfies, MultiComponentStringsSplitOnDot) {
  const std::string s = encode_selfies_string(parse_smiles("CC.O"));
  EXPECT_NE(s.find('.'), std::string::npos);
  EXPECT_TRUE(isomorphic(decode_selfies_string(s), parse_smiles("CC.O")));
}

TEST(EncodeSelfies, CuratedRoundTrip) {
  for (const std::string &smiles: testing::curated_smiles()) {
    const MolGraph g = parse_smiles(smiles);
    std::string encoded;
    try {
      encoded = encode_selfies_string(g);
    } catch (const Error &e) {
      ADD_FAILURE() << smiles << ": " << e.what();
      continue;
    }
    EXPECT_TRUE(isomorphic(decode_selfies_string(encoded), kekulize(g))) << smiles << " -> " << encoded;
  }
}

TEST(EncodeSelfies, RandomRoundTrip) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const MolGraph g = testing::random_molecule(rng);
    const SelfiesStream s = encode_selfies(g);
    ASSERT_TRUE(isomorphic(decode_selfies(s), kekulize(g))) << canonical_smiles(g) << " -> " << s.str();
  }
}

}  // namespace
}  // namespace molbench
