//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "molbench/molgraph.hpp"

namespace molbench {

enum class SelfiesTokenKind {
  kAtom,        // atom without bond prefix; also unknown tokens
  kBondedAtom,  // atom with '=', '#', '/' or '\' prefix
  kRing,
  kBranch,
};

struct SelfiesToken {
  std::string text;
  SelfiesTokenKind kind = SelfiesTokenKind::kAtom;

  bool operator==(const SelfiesToken &) const = default;
};

// Classifies a bracketed token by its text alone.
SelfiesToken make_selfies_token(std::string text);

// Value of a token when it is read as a ring/branch length digit (0..15);
// tokens outside the index alphabet read as 0.
int selfies_index_code(std::string_view token);

struct SelfiesStream {
  std::vector<SelfiesToken> tokens;

  std::size_t size() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }
  std::string str() const;
};

// Splits "[A][B]..." into tokens. Throws Error(kStrayCharacter) with the byte
// offset of the first character outside a bracket pair.
SelfiesStream tokenize_selfies(std::string_view text);

// Never fails on a non-empty stream: bond requests are capped by remaining
// valence and unknown tokens are skipped. Throws Error(kEmptyStream).
MolGraph decode_selfies(const SelfiesStream &stream);

// Kekulizes, then writes a depth-first derivation from atom 0. Throws
// Error(kNotEncodable) for empty, invalid or multi-component graphs and for
// atoms the token grammar cannot express.
SelfiesStream encode_selfies(const MolGraph &g);

// String-level helpers; '.' separates independently derived components.
MolGraph decode_selfies_string(std::string_view text);
std::string encode_selfies_string(const MolGraph &g);

}  // namespace molbench
