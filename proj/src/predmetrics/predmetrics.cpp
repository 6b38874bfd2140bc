//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbench/predmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "molbench/error.hpp"

namespace molbench {
namespace {

void check_scored(const ScoredLabels &s) {
  if (s.labels.size() != s.scores.size())
    throw Error(ErrorKind::kLengthMismatch,
                "labels and scores differ in length for task '" + s.task_id + "'");
  if (s.labels.empty())
    throw Error(ErrorKind::kEmptySequence, "no labels for task '" + s.task_id + "'");
  for (std::size_t i = 0; i < s.labels.size(); ++i) {
    if (s.labels[i] != 0 && s.labels[i] != 1)
      throw Error(ErrorKind::kInvalidArgument, "label is not 0 or 1");
    if (!std::isfinite(s.scores[i]))
      throw Error(ErrorKind::kInvalidArgument, "score is not finite");
  }
}

}  // namespace

double roc_auc(const ScoredLabels &s) {
  check_scored(s);
  const std::size_t n = s.scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return s.scores[a] < s.scores[b]; });

  // Sum of mid-ranks of positives (1-based ranks).
  double pos_rank_sum = 0.0;
  double positives = 0.0;
  std::size_t k = 0;
  while (k < n) {
    std::size_t end = k;
    while (end + 1 < n && s.scores[order[end + 1]] == s.scores[order[k]])
      ++end;
    const double mid = (static_cast<double>(k + 1) + static_cast<double>(end + 1)) / 2.0;
    for (std::size_t t = k; t <= end; ++t) {
      if (s.labels[order[t]] == 1) {
        pos_rank_sum += mid;
        positives += 1.0;
      }
    }
    k = end + 1;
  }
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0.0 || negatives == 0.0)
    throw Error(ErrorKind::kDegenerateLabels,
                "ROC-AUC needs both classes in task '" + s.task_id + "'");
  return (pos_rank_sum - positives * (positives + 1.0) / 2.0) /
         (positives * negatives);
}

double pr_auc(const ScoredLabels &s) {
  check_scored(s);
  const std::size_t n = s.scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return s.scores[a] > s.scores[b];
  });
  double hits = 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (s.labels[order[k]] == 1) {
      hits += 1.0;
      sum += hits / static_cast<double>(k + 1);
    }
  }
  if (hits == 0.0)
    throw Error(ErrorKind::kDegenerateLabels,
                "PR-AUC needs a positive label in task '" + s.task_id + "'");
  return sum / hits;
}

double f1_score(const ScoredLabels &s, double threshold) {
  check_scored(s);
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;
  for (std::size_t i = 0; i < s.labels.size(); ++i) {
    const bool predicted = s.scores[i] >= threshold;
    const bool actual = s.labels[i] == 1;
    tp += predicted && actual ? 1.0 : 0.0;
    fp += predicted && !actual ? 1.0 : 0.0;
    fn += !predicted && actual ? 1.0 : 0.0;
  }
  if (tp == 0.0)
    return 0.0;
  return 2.0 * tp / (2.0 * tp + fp + fn);
}

double f1_mean(std::span<const ScoredLabels> tasks, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw Error(ErrorKind::kInvalidArgument, "F1 threshold must lie in (0, 1)");
  if (tasks.empty())
    throw Error(ErrorKind::kEmptySequence, "F1 over no tasks");
  double sum = 0.0;
  for (const ScoredLabels &t: tasks)
    sum += f1_score(t, threshold);
  return sum / static_cast<double>(tasks.size());
}

RegressionMetrics regression_metrics(std::span<const double> predicted,
                                     std::span<const double> truth) {
  if (predicted.size() != truth.size())
    throw Error(ErrorKind::kLengthMismatch,
                "predictions and targets differ in length");
  if (predicted.empty())
    throw Error(ErrorKind::kEmptySequence, "no regression pairs");
  double sq = 0.0;
  double abs = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = predicted[i] - truth[i];
    sq += d * d;
    abs += std::fabs(d);
  }
  const auto n = static_cast<double>(truth.size());
  RegressionMetrics m;
  m.mse = sq / n;
  m.rmse = std::sqrt(m.mse);
  m.mae = abs / n;
  return m;
}

std::vector<double> pool(std::span<const std::vector<double>> sequence,
                         PoolMode mode) {
  if (sequence.empty())
    throw Error(ErrorKind::kEmptySequence, "pooling an empty sequence");
  const std::size_t dim = sequence.front().size();
  std::vector<double> out = sequence.front();
  for (std::size_t i = 1; i < sequence.size(); ++i) {
    if (sequence[i].size() != dim)
      throw Error(ErrorKind::kDimMismatch, "sequence vectors differ in dimension");
    for (std::size_t d = 0; d < dim; ++d) {
      if (mode == PoolMode::kAvg)
        out[d] += sequence[i][d];
      else
        out[d] = std::max(out[d], sequence[i][d]);
    }
  }
  if (mode == PoolMode::kAvg) {
    for (double &v: out)
      v /= static_cast<double>(sequence.size());
  }
  return out;
}

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> ids, std::size_t dim,
                                 std::vector<double> values)
    : ids_(std::move(ids)), dim_(dim), values_(std::move(values)) {
  if (dim_ < 1 || values_.size() != ids_.size() * dim_)
    throw Error(ErrorKind::kDimMismatch, "embedding rows do not match dimension");
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second)
      throw Error(ErrorKind::kInvalidArgument, "duplicate embedding id '" + ids_[i] + "'");
  }
}

long EmbeddingMatrix::find(const std::string &id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0)
    return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

RetrievalResult retrieval_eval(const EmbeddingMatrix &queries,
                               const EmbeddingMatrix &targets,
                               const std::map<std::string, std::string> &gold,
                               std::span<const int> ks) {
  if (queries.dim() != targets.dim())
    throw Error(ErrorKind::kDimMismatch, "query and target dimensions differ");
  if (gold.empty())
    throw Error(ErrorKind::kEmptyCorpus, "no gold pairs");
  RetrievalResult result;
  double rr_sum = 0.0;
  for (const auto &[qid, tid]: gold) {
    const long qi = queries.find(qid);
    if (qi < 0)
      throw Error(ErrorKind::kMissingId, "unknown query id '" + qid + "'");
    const long ti = targets.find(tid);
    if (ti < 0)
      throw Error(ErrorKind::kMissingId, "unknown target id '" + tid + "'");
    const auto q = queries.row(static_cast<std::size_t>(qi));
    const double gold_sim = cosine(q, targets.row(static_cast<std::size_t>(ti)));
    long rank = 1;
    for (std::size_t t = 0; t < targets.rows(); ++t) {
      if (static_cast<long>(t) == ti)
        continue;
      const double sim = cosine(q, targets.row(t));
      if (sim > gold_sim || (sim == gold_sim && targets.ids()[t] < tid))
        ++rank;
    }
    result.ranks.emplace_back(qid, rank);
    rr_sum += 1.0 / static_cast<double>(rank);
  }
  const auto n = static_cast<double>(result.ranks.size());
  result.mrr = rr_sum / n;
  for (int k: ks) {
    double hits = 0.0;
    for (const auto &[qid, rank]: result.ranks)
      hits += rank <= k ? 1.0 : 0.0;
    result.recall_at[k] = hits / n;
  }
  return result;
}

}  // namespace molbench
