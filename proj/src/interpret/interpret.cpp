//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbench/interpret.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>

#include "molbench/error.hpp"

namespace molbench {
namespace {

// The top_k tokens by count, ties by token ascending.
std::vector<std::string> top_tokens(const std::map<std::string, double> &freq,
                                    std::size_t top_k) {
  std::vector<std::pair<std::string, double>> items(freq.begin(), freq.end());
  std::stable_sort(items.begin(), items.end(),
                   [](const auto &a, const auto &b) { return a.second > b.second; });
  std::vector<std::string> out;
  for (std::size_t k = 0; k < items.size() && k < top_k; ++k)
    out.push_back(items[k].first);
  return out;
}

// Positions sorted by descending sum, ties by label ascending. Sums are
// compared on a grid of 2^-40 of the largest sum so that rounding noise from
// scaling does not reorder equal totals.
std::vector<std::size_t> sorted_order(const std::vector<double> &sums,
                                      const std::vector<std::string> &labels) {
  const double top = *std::max_element(sums.begin(), sums.end());
  std::vector<long long> keys;
  for (double v: sums)
    keys.push_back(top > 0.0 ? std::llround(v / top * 0x1p40) : 0);
  std::vector<std::size_t> order(sums.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b])
      return keys[a] > keys[b];
    return labels[a] < labels[b];
  });
  return order;
}

struct Neighbourhoods {
  MappingMatrix matrix;
  NeighborhoodStats stats;
  double margin = 0.0;
};

Neighbourhoods neighbourhoods(const MappingMatrix &m) {
  Neighbourhoods nb { sort_matrix(m), {}, 0.0 };
  nb.stats = neighborhood_stats(nb.matrix);
  double max_abs = 0.0;
  for (double v: nb.matrix.counts())
    max_abs = std::max(max_abs, std::fabs(v));
  nb.margin = kFilterRelativeMargin * max_abs;
  return nb;
}

FilterStats apply_threshold(const Neighbourhoods &nb, double threshold) {
  if (!std::isfinite(threshold) || threshold < 0.0)
    throw Error(ErrorKind::kInvalidArgument, "threshold T must be finite and >= 0");
  FilterStats s;
  s.matrix = nb.matrix;
  s.threshold = threshold;
  s.global_mean = nb.stats.global_mean;
  s.global_std = nb.stats.global_std;
  s.neighbor_means = nb.stats.means;
  s.neighbor_stds = nb.stats.stds;
  const std::vector<double> &a = nb.matrix.counts();
  s.flags.assign(a.size(), false);
  double expected_sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double bound = s.neighbor_means[k] + threshold * s.neighbor_stds[k];
    if (a[k] - bound > nb.margin) {
      s.flags[k] = true;
      ++s.flag_count;
    }
    if (s.global_std > 0.0)
      expected_sum += normal_cdf(-(bound - s.global_mean) / s.global_std);
  }
  const auto cells = static_cast<double>(a.size());
  s.p_actual = static_cast<double>(s.flag_count) / cells;
  if (s.global_std > 0.0) {
    s.p_expected = expected_sum / cells;
    if (s.p_expected > 0.0 && s.p_expected < 1.0) {
      s.z = proportion_z(s.p_actual, s.p_expected, a.size());
      s.confidence = normal_cdf(*s.z);
    }
  }
  return s;
}

std::size_t unique_pairs(const FilterStats &s) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.matrix.rows(); ++i) {
    for (std::size_t j = 0; j < s.matrix.cols(); ++j) {
      if (s.flagged(i, j) && s.matrix.row_tokens()[i] != s.matrix.col_tokens()[j])
        ++count;
    }
  }
  return count;
}

double parse_number(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw Error(ErrorKind::kInvalidArgument, "bad grid number '" + std::string(text) + "'");
  return v;
}

}  // namespace

MappingMatrix::MappingMatrix(std::vector<std::string> row_tokens,
                             std::vector<std::string> col_tokens, std::vector<double> counts)
    : row_tokens_(std::move(row_tokens)), col_tokens_(std::move(col_tokens)),
      counts_(std::move(counts)) {
  if (row_tokens_.size() < 2 || col_tokens_.size() < 2)
    throw Error(ErrorKind::kTooFewTokens, "mapping matrix needs at least 2 rows and 2 columns");
  if (counts_.size() != row_tokens_.size() * col_tokens_.size())
    throw Error(ErrorKind::kDimMismatch, "mapping matrix counts do not match its labels");
  for (double v: counts_) {
    if (!std::isfinite(v) || v < 0.0)
      throw Error(ErrorKind::kInvalidArgument, "mapping counts must be finite and >= 0");
  }
}

std::vector<double> MappingMatrix::row_sums() const {
  std::vector<double> sums(rows(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j)
      sums[i] += at(i, j);
  }
  return sums;
}

std::vector<double> MappingMatrix::col_sums() const {
  std::vector<double> sums(cols(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j)
      sums[j] += at(i, j);
  }
  return sums;
}

MappingMatrix MappingMatrix::scaled(double factor) const {
  std::vector<double> values = counts_;
  for (double &v: values)
    v *= factor;
  MappingMatrix out(row_tokens_, col_tokens_, std::move(values));
  out.truncated = truncated;
  return out;
}

MappingMatrix build_mapping_matrix(std::span<const TokenPair> pairs, int top_k,
                                   const std::set<std::string> &stoplist, CountMode mode) {
  if (pairs.empty())
    throw Error(ErrorKind::kEmptyCorpus, "no token pairs");
  if (top_k < 2)
    throw Error(ErrorKind::kInvalidArgument, "top_k must be at least 2");
  std::map<std::string, double> in_freq;
  std::map<std::string, double> out_freq;
  for (const TokenPair &p: pairs) {
    for (const std::string &t: p.input) {
      if (stoplist.count(t) == 0)
        in_freq[t] += 1.0;
    }
    for (const std::string &t: p.output) {
      if (stoplist.count(t) == 0)
        out_freq[t] += 1.0;
    }
  }
  const auto k = static_cast<std::size_t>(top_k);
  std::vector<std::string> rows = top_tokens(in_freq, k);
  std::vector<std::string> cols = top_tokens(out_freq, k);
  if (rows.size() < 2 || cols.size() < 2)
    throw Error(ErrorKind::kTooFewTokens,
                "fewer than 2 tokens left on an axis after stoplist filtering");

  std::map<std::string, std::size_t> row_index;
  std::map<std::string, std::size_t> col_index;
  for (std::size_t i = 0; i < rows.size(); ++i)
    row_index[rows[i]] = i;
  for (std::size_t j = 0; j < cols.size(); ++j)
    col_index[cols[j]] = j;

  std::vector<double> counts(rows.size() * cols.size(), 0.0);
  for (const TokenPair &p: pairs) {
    std::map<std::size_t, double> in_hits;
    std::map<std::size_t, double> out_hits;
    for (const std::string &t: p.input) {
      if (auto it = row_index.find(t); it != row_index.end())
        in_hits[it->second] += 1.0;
    }
    for (const std::string &t: p.output) {
      if (auto it = col_index.find(t); it != col_index.end())
        out_hits[it->second] += 1.0;
    }
    for (const auto &[i, ni]: in_hits) {
      for (const auto &[j, nj]: out_hits)
        counts[i * cols.size() + j] += mode == CountMode::kPresence ? 1.0 : ni * nj;
    }
  }
  const bool truncated = rows.size() < k || cols.size() < k;
  MappingMatrix m(std::move(rows), std::move(cols), std::move(counts));
  m.truncated = truncated;
  return m;
}

MappingMatrix sort_matrix(const MappingMatrix &m) {
  const auto row_order = sorted_order(m.row_sums(), m.row_tokens());
  const auto col_order = sorted_order(m.col_sums(), m.col_tokens());
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  for (std::size_t i: row_order)
    rows.push_back(m.row_tokens()[i]);
  for (std::size_t j: col_order)
    cols.push_back(m.col_tokens()[j]);
  std::vector<double> counts;
  counts.reserve(m.counts().size());
  for (std::size_t i: row_order) {
    for (std::size_t j: col_order)
      counts.push_back(m.at(i, j));
  }
  MappingMatrix out(std::move(rows), std::move(cols), std::move(counts));
  out.truncated = m.truncated;
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double proportion_z(double p_actual, double p_expected, std::size_t cells) {
  return (p_actual - p_expected) /
         std::sqrt(p_expected * (1.0 - p_expected) / static_cast<double>(cells));
}

NeighborhoodStats neighborhood_stats(const MappingMatrix &a) {
  NeighborhoodStats nb;
  const auto n = static_cast<long>(a.rows());
  const auto w = static_cast<long>(a.cols());
  nb.means.assign(a.counts().size(), 0.0);
  nb.stds.assign(a.counts().size(), 0.0);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < w; ++j) {
      std::vector<double> around;
      for (long di = -1; di <= 1; ++di) {
        for (long dj = -1; dj <= 1; ++dj) {
          const long r = i + di;
          const long c = j + dj;
          if ((di == 0 && dj == 0) || r < 0 || c < 0 || r >= n || c >= w)
            continue;
          around.push_back(a.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
        }
      }
      const auto k = static_cast<double>(around.size());
      const double mean = std::accumulate(around.begin(), around.end(), 0.0) / k;
      double sq = 0.0;
      for (double v: around)
        sq += (v - mean) * (v - mean);
      const auto idx = static_cast<std::size_t>(i * w + j);
      nb.means[idx] = mean;
      nb.stds[idx] = std::sqrt(sq / k);
    }
  }
  const auto cells = static_cast<double>(a.counts().size());
  nb.global_mean = std::accumulate(a.counts().begin(), a.counts().end(), 0.0) / cells;
  double sq = 0.0;
  for (double v: a.counts())
    sq += (v - nb.global_mean) * (v - nb.global_mean);
  nb.global_std = std::sqrt(sq / cells);
  return nb;
}

FilterStats filter_cells(const MappingMatrix &m, double threshold) {
  return apply_threshold(neighbourhoods(m), threshold);
}

FilterStats local_filter(const MappingMatrix &m, double threshold) {
  FilterStats s = filter_cells(m, threshold);
  if (s.global_std == 0.0)
    throw Error(ErrorKind::kDegenerateMatrix, "matrix has zero standard deviation");
  if (!s.z)
    throw Error(ErrorKind::kDegenerateMatrix, "expected proportion is 0 or 1");
  return s;
}

std::vector<SweepRow> sweep_threshold(const MappingMatrix &m, std::span<const double> grid) {
  if (grid.empty())
    throw Error(ErrorKind::kInvalidArgument, "empty threshold grid");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1]))
      throw Error(ErrorKind::kInvalidArgument, "threshold grid must be strictly increasing");
  }
  const Neighbourhoods nb = neighbourhoods(m);
  std::vector<SweepRow> rows;
  for (double t: grid) {
    const FilterStats s = apply_threshold(nb, t);
    rows.push_back({ t, s.flag_count, unique_pairs(s), s.z, s.confidence });
  }
  return rows;
}

std::vector<double> parse_grid(std::string_view text) {
  const std::size_t a = text.find(':');
  const std::size_t b = a == std::string_view::npos ? a : text.find(':', a + 1);
  if (b == std::string_view::npos)
    throw Error(ErrorKind::kInvalidArgument, "grid must be start:stop:step");
  const double start = parse_number(text.substr(0, a));
  const double stop = parse_number(text.substr(a + 1, b - a - 1));
  const double step = parse_number(text.substr(b + 1));
  if (!(step > 0.0) || stop < start)
    throw Error(ErrorKind::kInvalidArgument, "grid needs step > 0 and stop >= start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 1000000)
    throw Error(ErrorKind::kInvalidArgument, "grid has too many points");
  std::vector<double> grid;
  for (std::size_t k = 0; k < count; ++k)
    grid.push_back(start + static_cast<double>(k) * step);
  return grid;
}

std::vector<MappingPair> select_pairs(const MappingMatrix &m, const FilterStats &stats) {
  const MappingMatrix sorted = sort_matrix(m);
  if (!(sorted == stats.matrix))
    throw Error(ErrorKind::kInvalidArgument, "filter stats do not belong to this matrix");
  std::vector<MappingPair> pairs;
  for (std::size_t i = 0; i < sorted.rows(); ++i) {
    for (std::size_t j = 0; j < sorted.cols(); ++j) {
      if (stats.flagged(i, j) && sorted.row_tokens()[i] != sorted.col_tokens()[j])
        pairs.push_back({ sorted.row_tokens()[i], sorted.col_tokens()[j], sorted.at(i, j), {} });
    }
  }

  // Union-find over pairs sharing an input or an output token.
  std::vector<std::size_t> parent(pairs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::string, std::size_t> first_in;
  std::map<std::string, std::size_t> first_out;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto [in_it, in_new] = first_in.emplace(pairs[k].input_token, k);
    if (!in_new)
      parent[find(k)] = find(in_it->second);
    auto [out_it, out_new] = first_out.emplace(pairs[k].output_token, k);
    if (!out_new)
      parent[find(k)] = find(out_it->second);
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < pairs.size(); ++k)
    groups[find(k)].push_back(k);
  for (const auto &[root, members]: groups) {
    if (members.size() < 2)
      continue;
    // Most frequent token, input side before output side, then ascending.
    std::map<std::pair<int, std::string>, int> freq;
    for (std::size_t k: members) {
      freq[{ 0, pairs[k].input_token }] += 1;
      freq[{ 1, pairs[k].output_token }] += 1;
    }
    auto best = freq.begin();
    for (auto it = freq.begin(); it != freq.end(); ++it) {
      if (it->second > best->second)
        best = it;
    }
    for (std::size_t k: members)
      pairs[k].group_key = best->first.second;
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const MappingPair &a, const MappingPair &b) {
    if (a.value != b.value)
      return a.value > b.value;
    if (a.input_token != b.input_token)
      return a.input_token < b.input_token;
    return a.output_token < b.output_token;
  });
  return pairs;
}

std::vector<MappingGroup> group_pairs(std::span<const MappingPair> pairs) {
  std::map<std::string, std::set<std::string>> groups;
  std::vector<MappingGroup> out;
  for (const MappingPair &p: pairs) {
    // An ungrouped pair is a singleton group keyed by its input token.
    if (!p.group_key) {
      out.push_back({ p.input_token, { p.output_token } });
      continue;
    }
    const std::string &key = *p.group_key;
    std::set<std::string> &members = groups[key];
    if (p.input_token == key)
      members.insert(p.output_token);
    else if (p.output_token == key)
      members.insert(p.input_token);
    else {
      members.insert(p.input_token);
      members.insert(p.output_token);
    }
  }
  for (auto &[key, members]: groups)
    out.push_back({ key, std::vector<std::string>(members.begin(), members.end()) });
  std::stable_sort(out.begin(), out.end(), [](const MappingGroup &a, const MappingGroup &b) {
    return a.key != b.key ? a.key < b.key : a.members < b.members;
  });
  return out;
}

}  // namespace molbench
