//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "molbench/molgraph.hpp"

namespace molbench {

enum class FingerprintKind { kMorgan, kPath };

inline constexpr int kDefaultFingerprintWidth = 2048;

// Fixed-width folded bitset. parameter is the Morgan radius or the maximum
// path length, and is part of the kind for compatibility checks.
class Fingerprint {
public:
  // Throws Error(kInvalidArgument) unless width is a power of two >= 64.
  Fingerprint(FingerprintKind kind, int parameter, int width);

  FingerprintKind kind() const noexcept { return kind_; }
  int parameter() const noexcept { return parameter_; }
  int width() const noexcept { return width_; }

  bool test(int bit) const;
  void set(int bit);
  int popcount() const;
  std::vector<int> on_bits() const;

  bool operator==(const Fingerprint &) const = default;

private:
  FingerprintKind kind_;
  int parameter_;
  int width_;
  std::vector<std::uint64_t> words_;
};

// 64-bit FNV-1a; values are fed as 4-byte little-endian words.
class Fnv1a {
public:
  void add(std::int32_t value);
  void add64(std::uint64_t value);
  std::uint64_t value() const noexcept { return hash_; }

private:
  std::uint64_t hash_ = 14695981039346656037ull;
};

// Unfolded feature identifiers.
std::set<std::uint64_t> morgan_features(const MolGraph &g, int radius);
std::set<std::uint64_t> path_features(const MolGraph &g, int max_len);

// Folds features with bit = feature mod width.
Fingerprint fold_features(const std::set<std::uint64_t> &features,
                          FingerprintKind kind, int parameter, int width);

// radius in [0, 6]; max_len in [1, 7]. Throws Error(kInvalidArgument).
Fingerprint morgan_fp(const MolGraph &g, int radius,
                      int width = kDefaultFingerprintWidth);
Fingerprint path_fp(const MolGraph &g, int max_len,
                    int width = kDefaultFingerprintWidth);

// |a & b| / |a | b|, 1.0 when both are empty. Throws Error(kWidthMismatch)
// or Error(kKindMismatch).
double tanimoto(const Fingerprint &a, const Fingerprint &b);
double tanimoto(const std::set<std::uint64_t> &a,
                const std::set<std::uint64_t> &b);

}  // namespace molbench
