//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace molbench {

// Input-token by output-token co-occurrence counts, row-major.
class MappingMatrix {
public:
  MappingMatrix() = default;
  // Throws Error(kDimMismatch) if counts.size() != rows * cols,
  // Error(kTooFewTokens) for fewer than 2 rows or columns,
  // Error(kInvalidArgument) for negative or non-finite counts.
  MappingMatrix(std::vector<std::string> row_tokens, std::vector<std::string> col_tokens,
                std::vector<double> counts);

  std::size_t rows() const noexcept { return row_tokens_.size(); }
  std::size_t cols() const noexcept { return col_tokens_.size(); }
  double at(std::size_t i, std::size_t j) const { return counts_[i * cols() + j]; }
  const std::vector<std::string> &row_tokens() const noexcept { return row_tokens_; }
  const std::vector<std::string> &col_tokens() const noexcept { return col_tokens_; }
  const std::vector<double> &counts() const noexcept { return counts_; }
  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;

  // Set when an axis had fewer than top_k candidate tokens.
  bool truncated = false;

  MappingMatrix scaled(double factor) const;
  bool operator==(const MappingMatrix &other) const {
    return row_tokens_ == other.row_tokens_ && col_tokens_ == other.col_tokens_ &&
           counts_ == other.counts_;
  }

private:
  std::vector<std::string> row_tokens_;
  std::vector<std::string> col_tokens_;
  std::vector<double> counts_;
};

enum class CountMode { kPresence, kOccurrence };

inline constexpr int kDefaultTopK = 20;

struct TokenPair {
  std::vector<std::string> input;
  std::vector<std::string> output;
};

// Keeps the top_k most frequent tokens per axis (occurrence count, ties by
// token ascending) after removing stoplist tokens. Presence mode adds 1 per
// record for each co-occurring row/column token pair; occurrence mode adds the
// product of their multiplicities. Throws Error(kEmptyCorpus),
// Error(kInvalidArgument) for top_k < 2, Error(kTooFewTokens) when an axis
// keeps fewer than 2 tokens.
MappingMatrix build_mapping_matrix(std::span<const TokenPair> pairs, int top_k,
                                   const std::set<std::string> &stoplist,
                                   CountMode mode = CountMode::kPresence);

// Rows by descending row sum, columns by descending column sum; ties by token
// ascending.
MappingMatrix sort_matrix(const MappingMatrix &m);

// Standard normal CDF via std::erfc: Phi(x) = erfc(-x / sqrt(2)) / 2.
double normal_cdf(double x);

// One-sided test statistic for an observed against an expected proportion
// over `cells` trials.
double proportion_z(double p_actual, double p_expected, std::size_t cells);

struct FilterStats {
  MappingMatrix matrix;  // sorted matrix the flags refer to
  double threshold = 0.0;
  std::vector<bool> flags;  // row-major
  std::size_t flag_count = 0;
  double p_actual = 0.0;
  double p_expected = 0.0;
  // Absent when the global std is 0 or the expected proportion is 0 or 1.
  std::optional<double> z;
  std::optional<double> confidence;
  double global_mean = 0.0;
  double global_std = 0.0;
  std::vector<double> neighbor_means;
  std::vector<double> neighbor_stds;

  bool flagged(std::size_t i, std::size_t j) const { return flags[i * matrix.cols() + j]; }
};

struct NeighborhoodStats {
  std::vector<double> means;  // row-major
  std::vector<double> stds;
  double global_mean = 0.0;
  double global_std = 0.0;
};

// Moore radius-1 neighbourhood mean and population std per cell, centre
// excluded and truncated at borders, on m in its given order.
NeighborhoodStats neighborhood_stats(const MappingMatrix &m);

// Relative margin below which a cell is not considered to exceed its
// neighbourhood bound; keeps flags identical under positive scaling.
inline constexpr double kFilterRelativeMargin = 1e-12;

// Sorts m, then flags cells exceeding mean + T * std of their Moore
// neighbourhood (radius 1, centre excluded, population std). The expected
// proportion averages 1 - Phi((mean_n + T * std_n - mean) / std) over cells.
// Throws Error(kInvalidArgument) for T < 0 or non-finite T. z and confidence
// are left empty when undefined.
FilterStats filter_cells(const MappingMatrix &m, double threshold);

// filter_cells, throwing Error(kDegenerateMatrix) when z is undefined.
FilterStats local_filter(const MappingMatrix &m, double threshold);

struct SweepRow {
  double threshold = 0.0;
  std::size_t flag_count = 0;
  std::size_t unique_pair_count = 0;
  std::optional<double> z;
  std::optional<double> confidence;
};

// One filter_cells row per threshold; rows with undefined z keep it empty.
// Throws Error(kInvalidArgument) unless grid is non-empty and strictly
// increasing.
std::vector<SweepRow> sweep_threshold(const MappingMatrix &m, std::span<const double> grid);

// Parses "start:stop:step" into an inclusive grid.
std::vector<double> parse_grid(std::string_view text);

struct MappingPair {
  std::string input_token;
  std::string output_token;
  double value = 0.0;
  std::optional<std::string> group_key;
};

// Flagged cells as pairs, identical-name pairs dropped. Pairs connected
// through a shared input or output token share a group key: the token
// appearing in most pairs of the group (input side first, then ascending).
// Singletons have no key. Sorted by value descending, then tokens.
// Throws Error(kInvalidArgument) if stats were not computed from m.
std::vector<MappingPair> select_pairs(const MappingMatrix &m, const FilterStats &stats);

struct MappingGroup {
  std::string key;
  std::vector<std::string> members;  // tokens paired with key, ascending
};

// Consolidated listing of keyed pairs, ordered by key.
std::vector<MappingGroup> group_pairs(std::span<const MappingPair> pairs);

}  // namespace molbench
