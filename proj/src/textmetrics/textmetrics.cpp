//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbench/textmetrics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>

#include "molbench/error.hpp"
#include "molbench/smiles.hpp"

namespace molbench {
namespace {

bool ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts count_ngrams(std::span<const std::string> tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n)
    return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<long>(i),
                                      tokens.begin() + static_cast<long>(i + n))];
  return counts;
}

// Clipped matches and total candidate n-grams for one sentence.
std::pair<long, long> clipped(std::span<const std::string> cand,
                              std::span<const Tokens> refs, std::size_t n) {
  const NgramCounts c = count_ngrams(cand, n);
  NgramCounts max_ref;
  for (const Tokens &r: refs) {
    for (const auto &[gram, count]: count_ngrams(r, n)) {
      int &slot = max_ref[gram];
      slot = std::max(slot, count);
    }
  }
  long matches = 0;
  long total = 0;
  for (const auto &[gram, count]: c) {
    total += count;
    auto it = max_ref.find(gram);
    if (it != max_ref.end())
      matches += std::min(count, it->second);
  }
  return { matches, total };
}

std::size_t closest_ref_length(std::size_t cand_len,
                               std::span<const Tokens> refs) {
  std::size_t best = refs.front().size();
  for (const Tokens &r: refs) {
    const auto d = [&](std::size_t len) {
      return len > cand_len ? len - cand_len : cand_len - len;
    };
    if (d(r.size()) < d(best) || (d(r.size()) == d(best) && r.size() < best))
      best = r.size();
  }
  return best;
}

double brevity_penalty(double c, double r) {
  if (c <= 0.0)
    return 0.0;
  return std::exp(std::min(0.0, 1.0 - r / c));
}

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80)
    return 1;
  if ((lead >> 5) == 0x6)
    return 2;
  if ((lead >> 4) == 0xe)
    return 3;
  if ((lead >> 3) == 0x1e)
    return 4;
  return 1;
}

}  // namespace

std::string_view token_scheme_name(TokenScheme scheme) {
  switch (scheme) {
  case TokenScheme::kWhitespace:
    return "whitespace";
  case TokenScheme::kSmilesRegex:
    return "smiles_regex";
  case TokenScheme::kSelfiesBracket:
    return "selfies_bracket";
  case TokenScheme::kChar:
    return "char";
  }
  return "whitespace";
}

std::optional<TokenScheme> parse_token_scheme(std::string_view name) {
  for (TokenScheme s: { TokenScheme::kWhitespace, TokenScheme::kSmilesRegex,
                        TokenScheme::kSelfiesBracket, TokenScheme::kChar }) {
    if (token_scheme_name(s) == name)
      return s;
  }
  return std::nullopt;
}

std::string TokenSeq::joined() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && scheme == TokenScheme::kWhitespace)
      out += ' ';
    out += tokens[i];
  }
  return out;
}

TokenSeq tokenize(std::string_view text, TokenScheme scheme) {
  TokenSeq seq;
  seq.scheme = scheme;
  Tokens &out = seq.tokens;
  std::size_t i = 0;
  switch (scheme) {
  case TokenScheme::kWhitespace:
    while (i < text.size()) {
      while (i < text.size() && ascii_space(text[i]))
        ++i;
      const std::size_t start = i;
      while (i < text.size() && !ascii_space(text[i]))
        ++i;
      if (i > start)
        out.emplace_back(text.substr(start, i - start));
    }
    break;
  case TokenScheme::kSmilesRegex:
    while (i < text.size()) {
      const char c = text[i];
      if (ascii_space(c)) {
        ++i;
        continue;
      }
      std::size_t len = 1;
      if (c == '[') {
        const std::size_t close = text.find(']', i);
        if (close != std::string_view::npos)
          len = close - i + 1;
      } else if ((c == 'C' || c == 'B') && i + 1 < text.size() &&
                 text[i + 1] == (c == 'C' ? 'l' : 'r')) {
        len = 2;
      } else if (c == '%' && i + 2 < text.size() &&
                 std::isdigit(static_cast<unsigned char>(text[i + 1])) &&
                 std::isdigit(static_cast<unsigned char>(text[i + 2]))) {
        len = 3;
      }
      out.emplace_back(text.substr(i, len));
      i += len;
    }
    break;
  case TokenScheme::kSelfiesBracket:
    while (i < text.size()) {
      if (ascii_space(text[i])) {
        ++i;
        continue;
      }
      std::size_t len = 1;
      if (text[i] == '[') {
        const std::size_t close = text.find(']', i);
        if (close != std::string_view::npos)
          len = close - i + 1;
      }
      out.emplace_back(text.substr(i, len));
      i += len;
    }
    break;
  case TokenScheme::kChar:
    while (i < text.size()) {
      const std::size_t len =
          std::min(utf8_length(static_cast<unsigned char>(text[i])), text.size() - i);
      out.emplace_back(text.substr(i, len));
      i += len;
    }
    break;
  }
  return seq;
}

double corpus_bleu(std::span<const Tokens> candidates,
                   std::span<const std::vector<Tokens>> references, int max_n) {
  if (candidates.size() != references.size())
    throw Error(ErrorKind::kLengthMismatch,
                "candidate and reference counts differ");
  if (candidates.empty())
    throw Error(ErrorKind::kEmptyCorpus, "BLEU over an empty corpus");
  if (max_n < 1)
    throw Error(ErrorKind::kInvalidArgument, "BLEU order must be >= 1");

  std::vector<long> matches(static_cast<std::size_t>(max_n), 0);
  std::vector<long> totals(static_cast<std::size_t>(max_n), 0);
  double c = 0.0;
  double r = 0.0;
  for (std::size_t s = 0; s < candidates.size(); ++s) {
    const auto &refs = references[s];
    if (refs.empty())
      throw Error(ErrorKind::kEmptyCorpus, "candidate without references");
    for (int n = 1; n <= max_n; ++n) {
      auto [m, t] = clipped(candidates[s], refs, static_cast<std::size_t>(n));
      matches[static_cast<std::size_t>(n - 1)] += m;
      totals[static_cast<std::size_t>(n - 1)] += t;
    }
    c += static_cast<double>(candidates[s].size());
    r += static_cast<double>(closest_ref_length(candidates[s].size(), refs));
  }
  // Orders with no candidate n-grams (every sentence shorter than n) are left
  // out of the geometric mean, so identical inputs always score 1.
  double log_sum = 0.0;
  int orders = 0;
  for (int n = 0; n < max_n; ++n) {
    const auto idx = static_cast<std::size_t>(n);
    if (totals[idx] == 0)
      continue;
    if (matches[idx] == 0)
      return 0.0;
    log_sum += std::log(static_cast<double>(matches[idx]) /
                        static_cast<double>(totals[idx]));
    ++orders;
  }
  if (orders == 0)
    return 0.0;
  return brevity_penalty(c, r) * std::exp(log_sum / orders);
}

double bleu(std::span<const TokenSeq> candidates,
            std::span<const TokenSeq> references, int max_n) {
  if (candidates.size() != references.size())
    throw Error(ErrorKind::kLengthMismatch,
                "candidate and reference counts differ");
  std::vector<Tokens> cands;
  std::vector<std::vector<Tokens>> refs;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    cands.push_back(candidates[i].tokens);
    refs.push_back({ references[i].tokens });
  }
  return corpus_bleu(cands, refs, max_n);
}

double sentence_bleu(std::span<const std::string> candidate,
                     std::span<const Tokens> references, int max_n) {
  if (references.empty())
    throw Error(ErrorKind::kEmptyCorpus, "candidate without references");
  if (max_n < 1)
    throw Error(ErrorKind::kInvalidArgument, "BLEU order must be >= 1");
  if (candidate.empty())
    return 0.0;
  double log_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= max_n; ++n) {
    auto [m, t] = clipped(candidate, references, static_cast<std::size_t>(n));
    if (t == 0)
      continue;
    const double p = m > 0 ? static_cast<double>(m) / static_cast<double>(t)
                           : kSentenceBleuEpsilon / static_cast<double>(t);
    log_sum += std::log(p);
    ++orders;
  }
  const double r =
      static_cast<double>(closest_ref_length(candidate.size(), references));
  return brevity_penalty(static_cast<double>(candidate.size()), r) *
         std::exp(log_sum / orders);
}

std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge(std::span<const std::string> candidate,
             std::span<const std::string> reference, RougeVariant variant) {
  if (candidate.empty() || reference.empty())
    throw Error(ErrorKind::kEmptyInput, "ROUGE needs non-empty sequences");
  double overlap = 0.0;
  double cand_total = 0.0;
  double ref_total = 0.0;
  if (variant == RougeVariant::kRL) {
    overlap = static_cast<double>(lcs_length(candidate, reference));
    cand_total = static_cast<double>(candidate.size());
    ref_total = static_cast<double>(reference.size());
  } else {
    const std::size_t n = variant == RougeVariant::kR1 ? 1 : 2;
    const NgramCounts c = count_ngrams(candidate, n);
    const NgramCounts r = count_ngrams(reference, n);
    for (const auto &[gram, count]: c) {
      cand_total += count;
      auto it = r.find(gram);
      if (it != r.end())
        overlap += std::min(count, it->second);
    }
    for (const auto &[gram, count]: r)
      ref_total += count;
  }
  if (overlap == 0.0)
    return 0.0;
  const double p = overlap / cand_total;
  const double rec = overlap / ref_total;
  return 2.0 * p * rec / (p + rec);
}

std::string strip_suffix(std::string_view word) {
  static constexpr std::array<std::string_view, 5> kSuffixes = { "ing", "es",
                                                                 "ed", "ly", "s" };
  for (std::string_view suffix: kSuffixes) {
    if (word.size() > suffix.size() + 2 && word.ends_with(suffix))
      return std::string(word.substr(0, word.size() - suffix.size()));
  }
  return std::string(word);
}

double meteor_lite(std::span<const std::string> candidate,
                   std::span<const std::string> reference) {
  if (candidate.empty() || reference.empty())
    throw Error(ErrorKind::kEmptyInput, "METEOR needs non-empty sequences");
  constexpr int kFree = -1;
  std::vector<int> cand_to_ref(candidate.size(), kFree);
  std::vector<bool> ref_used(reference.size(), false);

  auto align = [&](auto &&same) {
    for (std::size_t i = 0; i < candidate.size(); ++i) {
      if (cand_to_ref[i] != kFree)
        continue;
      for (std::size_t j = 0; j < reference.size(); ++j) {
        if (!ref_used[j] && same(candidate[i], reference[j])) {
          cand_to_ref[i] = static_cast<int>(j);
          ref_used[j] = true;
          break;
        }
      }
    }
  };
  align([](const std::string &a, const std::string &b) { return a == b; });
  align([](const std::string &a, const std::string &b) {
    return strip_suffix(a) == strip_suffix(b);
  });

  int matches = 0;
  int chunks = 0;
  int last_ref = std::numeric_limits<int>::min();
  bool in_chunk = false;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    const int j = cand_to_ref[i];
    if (j == kFree) {
      in_chunk = false;
      continue;
    }
    ++matches;
    if (!in_chunk || j != last_ref + 1)
      ++chunks;
    in_chunk = true;
    last_ref = j;
  }
  if (matches == 0)
    return 0.0;
  const double p = static_cast<double>(matches) / static_cast<double>(candidate.size());
  const double r = static_cast<double>(matches) / static_cast<double>(reference.size());
  const double fmean = 10.0 * p * r / (r + 9.0 * p);
  const double frag = static_cast<double>(chunks) / matches;
  const double penalty = 0.5 * frag * frag * frag;
  return fmean * (1.0 - penalty);
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j)
    row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({ row[j] + 1, row[j - 1] + 1,
                          diag + (a[i - 1] == b[j - 1] ? 0u : 1u) });
      diag = up;
    }
  }
  return row[b.size()];
}

bool exact_match(std::string_view candidate, std::string_view reference) {
  try {
    const MolGraph c = parse_smiles(candidate);
    const MolGraph r = parse_smiles(reference);
    if (!is_valid(c) || !is_valid(r))
      return false;
    return canonical_smiles(c) == canonical_smiles(r);
  } catch (const Error &) {
    return false;
  }
}

bool exact_match_raw(std::string_view candidate, std::string_view reference) {
  return candidate == reference;
}

}  // namespace molbench
