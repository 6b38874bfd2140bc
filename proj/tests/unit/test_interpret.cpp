//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "molbench/error.hpp"
#include "molbench/interpret.hpp"

namespace molbench {
namespace {

std::vector<std::string> names(const std::string &prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(prefix + (i < 10 ? "0" : "") + std::to_string(i));
  return out;
}

MappingMatrix random_matrix(std::mt19937_64 &rng, std::size_t rows, std::size_t cols) {
  std::poisson_distribution<int> counts(6.0);
  std::vector<double> v(rows * cols);
  for (double &x: v)
    x = counts(rng);
  return MappingMatrix(names("r", rows), names("c", cols), v);
}

TokenPair pair(std::vector<std::string> in, std::vector<std::string> out) { return { std::move(in), std::move(out) }; }

TEST(BuildMappingMatrix, HandCount) {
  const std::vector<TokenPair> pairs { pair({ "a", "b" }, { "x", "y" }), pair({ "a", "c" }, { "x", "z" }) };
  const MappingMatrix m = build_mapping_matrix(pairs, 2, {});
  EXPECT_EQ(m.row_tokens(), (std::vector<std::string> { "a", "b" }));
  EXPECT_EQ(m.col_tokens(), (std::vector<std::string> { "x", "y" }));
  EXPECT_EQ(m.at(0, 0), 2.0);
  EXPECT_FALSE(m.truncated);
}

TEST(BuildMappingMatrix, SingleRecordAllOnes) {
  const std::vector<TokenPair> pairs { pair({ "a", "b", "c" }, { "x", "y" }) };
  const MappingMatrix m = build_mapping_matrix(pairs, 5, {});
  for (double v: m.counts())
    EXPECT_EQ(v, 1.0);
  EXPECT_TRUE(m.truncated);
}

TEST(BuildMappingMatrix, OccurrenceMode) {
  const std::vector<TokenPair> pairs { pair({ "a", "a", "b" }, { "x", "y", "y" }) };
  const MappingMatrix m = build_mapping_matrix(pairs, 2, {}, CountMode::kOccurrence);
  // Columns by frequency: y (2) before x (1).
  EXPECT_EQ(m.col_tokens(), (std::vector<std::string> { "y", "x" }));
  EXPECT_EQ(m.at(0, 0), 4.0);  // a twice, y twice
  EXPECT_EQ(m.at(0, 1), 2.0);
  const MappingMatrix presence = build_mapping_matrix(pairs, 2, {});
  EXPECT_EQ(presence.at(0, 0), 1.0);
}

TEST(BuildMappingMatrix, Errors) {
  const std::vector<TokenPair> pairs { pair({ "a", "b" }, { "x", "y" }) };
  try {
    build_mapping_matrix(pairs, 2, { "x", "y" });
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTooFewTokens);
  }
  EXPECT_THROW(build_mapping_matrix({}, 2, {}), Error);
  EXPECT_THROW(build_mapping_matrix(pairs, 1, {}), Error);
}

TEST(SortMatrix, RowSumOrder) {
  const MappingMatrix m({ "p", "q", "r" }, { "x", "y" }, { 1, 2, 3, 4, 2, 3 });
  const MappingMatrix s = sort_matrix(m);
  EXPECT_EQ(s.row_tokens(), (std::vector<std::string> { "q", "r", "p" }));
  EXPECT_EQ(sort_matrix(s), s);
}

TEST(SortMatrix, TiesByToken) {
  const MappingMatrix m({ "b", "a", "c" }, { "y", "x" }, std::vector<double>(6, 1.0));
  const MappingMatrix s = sort_matrix(m);
  EXPECT_EQ(s.row_tokens(), (std::vector<std::string> { "a", "b", "c" }));
  EXPECT_EQ(s.col_tokens(), (std::vector<std::string> { "x", "y" }));
}

TEST(NeighborhoodStats, CentreCellExample) {
  const MappingMatrix m({ "a", "b", "c" }, { "x", "y", "z" }, { 1, 2, 3, 4, 10, 6, 7, 8, 9 });
  const NeighborhoodStats n = neighborhood_stats(m);
  EXPECT_DOUBLE_EQ(n.means[4], 5.0);
  EXPECT_NEAR(n.stds[4], 2.7386, 1e-4);
  EXPECT_GT(10.0, n.means[4] + 1.0 * n.stds[4]);
  EXPECT_LT(10.0, n.means[4] + 2.0 * n.stds[4]);
}

TEST(LocalFilter, ConstantMatrixFlagsNothing) {
  const MappingMatrix m(names("r", 4), names("c", 4), std::vector<double>(16, 3.0));
  for (double t: { 0.1, 1.0, 5.0 }) {
    const FilterStats s = filter_cells(m, t);
    EXPECT_EQ(s.flag_count, 0u);
    EXPECT_FALSE(s.z.has_value());
  }
  try {
    local_filter(m, 1.0);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateMatrix);
  }
  for (const SweepRow &row: sweep_threshold(m, parse_grid("0:2:0.5")))
    EXPECT_EQ(row.flag_count, 0u);
}

TEST(LocalFilter, RejectsBadThreshold) {
  std::mt19937_64 rng(71);
  const MappingMatrix m = random_matrix(rng, 5, 5);
  EXPECT_THROW(local_filter(m, -1.0), Error);
  EXPECT_THROW(local_filter(m, std::nan("")), Error);
}

TEST(ZTest, Values) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  // Confidence levels quoted to two decimals in percent.
  EXPECT_NEAR(100.0 * normal_cdf(2.758), 99.71, 0.005);
  EXPECT_NEAR(100.0 * normal_cdf(2.476), 99.34, 0.005);
  for (double x: { 0.3, 1.0, 2.5, 6.0 })
    EXPECT_NEAR(normal_cdf(x) + normal_cdf(-x), 1.0, 1e-15);
  EXPECT_NEAR(proportion_z(0.05, 0.03, 400), 2.345, 1e-3);
}

TEST(LocalFilter, ScaleInvariant) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    const MappingMatrix m = random_matrix(rng, 8, 9);
    for (double c: { 0.5, 3.7, 100.0 })
      for (double t: { 0.5, 1.0, 2.0, 3.5 })
        ASSERT_EQ(filter_cells(m.scaled(c), t).flags, filter_cells(m, t).flags);
  }
}

TEST(Sweep, FlagCountNonIncreasing) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<SweepRow> rows = sweep_threshold(random_matrix(rng, 10, 10), parse_grid("0:5:0.25"));
    for (std::size_t k = 1; k < rows.size(); ++k)
      ASSERT_LE(rows[k].flag_count, rows[k - 1].flag_count);
  }
}

TEST(Sweep, ParseGrid) {
  const std::vector<double> g = parse_grid("0:1:0.25");
  EXPECT_EQ(g, (std::vector<double> { 0, 0.25, 0.5, 0.75, 1.0 }));
  EXPECT_THROW(parse_grid("1:0:0.1"), Error);
  EXPECT_THROW(parse_grid("a:b"), Error);
}

// Filter result on a uniform matrix with flags set by hand on named cells.
struct HandFlags {
  MappingMatrix matrix;
  FilterStats stats;
};

HandFlags hand_flags(const std::vector<std::string> &rows, const std::vector<std::string> &cols,
                     const std::vector<std::pair<std::string, std::string>> &hot) {
  const MappingMatrix m(rows, cols, std::vector<double>(rows.size() * cols.size(), 1.0));
  FilterStats s = filter_cells(m, 1.0);
  const auto &rt = s.matrix.row_tokens();
  const auto &ct = s.matrix.col_tokens();
  for (const auto &[r, c]: hot) {
    const auto i = static_cast<std::size_t>(std::find(rt.begin(), rt.end(), r) - rt.begin());
    const auto j = static_cast<std::size_t>(std::find(ct.begin(), ct.end(), c) - ct.begin());
    s.flags[i * ct.size() + j] = true;
  }
  return { m, s };
}

TEST(SelectPairs, AcidGroup) {
  const HandFlags h = hand_flags({ "acid", "oxy", "r2", "r3", "r4" }, { "box", "c1", "lic", "c3", "oxy" },
                                 { { "acid", "box" }, { "acid", "lic" }, { "oxy", "oxy" } });
  const std::vector<MappingPair> pairs = select_pairs(h.matrix, h.stats);
  ASSERT_EQ(pairs.size(), 2u);
  for (const MappingPair &p: pairs)
    EXPECT_EQ(p.group_key, "acid");
  const std::vector<MappingGroup> groups = group_pairs(pairs);
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].key, "acid");
  EXPECT_EQ(groups[0].members, (std::vector<std::string> { "box", "lic" }));
}

TEST(SelectPairs, DisjointPairsAreSingletons) {
  const HandFlags h = hand_flags({ "a", "b", "c" }, { "u", "v", "w" }, { { "a", "u" }, { "c", "w" } });
  const std::vector<MappingPair> pairs = select_pairs(h.matrix, h.stats);
  ASSERT_EQ(pairs.size(), 2u);
  for (const MappingPair &p: pairs)
    EXPECT_FALSE(p.group_key.has_value());
  const std::vector<MappingGroup> groups = group_pairs(pairs);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].key, "a");
  EXPECT_EQ(groups[0].members, (std::vector<std::string> { "u" }));
}

TEST(SelectPairs, RejectsStatsOfAnotherMatrix) {
  const HandFlags h = hand_flags({ "a", "b" }, { "u", "v" }, {});
  const MappingMatrix other({ "a", "b" }, { "u", "w" }, { 1, 1, 1, 1 });
  EXPECT_THROW(select_pairs(other, h.stats), Error);
}

TEST(MappingMatrix, Validation) {
  EXPECT_THROW(MappingMatrix({ "a" }, { "x", "y" }, { 1, 2 }), Error);
  EXPECT_THROW(MappingMatrix({ "a", "b" }, { "x", "y" }, { 1, 2, 3 }), Error);
  EXPECT_THROW(MappingMatrix({ "a", "b" }, { "x", "y" }, { 1, 2, 3, -4 }), Error);
}

}  // namespace
}  // namespace molbench
