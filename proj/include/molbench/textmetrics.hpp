//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace molbench {

enum class TokenScheme { kWhitespace, kSmilesRegex, kSelfiesBracket, kChar };

std::string_view token_scheme_name(TokenScheme scheme);
std::optional<TokenScheme> parse_token_scheme(std::string_view name);

using Tokens = std::vector<std::string>;

struct TokenSeq {
  Tokens tokens;
  TokenScheme scheme = TokenScheme::kWhitespace;

  // Tokens joined with the scheme's separator (' ' for whitespace, none
  // otherwise).
  std::string joined() const;
};

// whitespace: runs of ASCII whitespace separate tokens.
// smiles_regex: bracket atoms, Cl, Br and %nn are single tokens; every other
//   non-space character is its own token.
// selfies_bracket: each [..] is a token; stray characters are single tokens.
// char: one token per UTF-8 code point.
TokenSeq tokenize(std::string_view text, TokenScheme scheme);

// Corpus BLEU with clipped n-gram counts over n = 1..max_n and brevity
// penalty exp(min(0, 1 - r/c)), r the closest reference length (shorter on
// ties). Any zero precision gives 0. Throws Error(kLengthMismatch),
// Error(kEmptyCorpus), Error(kInvalidArgument) for max_n < 1.
double corpus_bleu(std::span<const Tokens> candidates,
                   std::span<const std::vector<Tokens>> references, int max_n);
// Single reference per candidate.
double bleu(std::span<const TokenSeq> candidates,
            std::span<const TokenSeq> references, int max_n);

// Per-sentence BLEU; zero precisions are replaced by 1e-9 / max(total, 1).
inline constexpr double kSentenceBleuEpsilon = 1e-9;
double sentence_bleu(std::span<const std::string> candidate,
                     std::span<const Tokens> references, int max_n);

enum class RougeVariant { kR1, kR2, kRL };

// F1 of clipped n-gram overlap (r1, r2) or of the longest common subsequence
// (rl). Throws Error(kEmptyInput) if either side is empty.
double rouge(std::span<const std::string> candidate,
             std::span<const std::string> reference, RougeVariant variant);

std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b);

// Strips the longest of ing/es/ed/ly/s when at least three characters
// remain.
std::string strip_suffix(std::string_view word);

// Exact then stem matching, each stage aligning candidate tokens left to
// right with the leftmost free reference token. Case sensitive.
// Throws Error(kEmptyInput).
double meteor_lite(std::span<const std::string> candidate,
                   std::span<const std::string> reference);

// Byte-level edit distance.
std::size_t levenshtein(std::string_view a, std::string_view b);

// Both sides parse as valid SMILES with equal canonical forms.
bool exact_match(std::string_view candidate, std::string_view reference);
bool exact_match_raw(std::string_view candidate, std::string_view reference);

}  // namespace molbench
