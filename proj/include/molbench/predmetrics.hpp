//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace molbench {

struct ScoredLabels {
  std::vector<int> labels;  // 0 or 1
  std::vector<double> scores;
  std::string task_id;
};

// Probability that a random positive outscores a random negative, ties
// counting one half. Throws Error(kDegenerateLabels) for single-class input,
// Error(kLengthMismatch), Error(kInvalidArgument) for labels outside {0, 1}
// or non-finite scores.
double roc_auc(const ScoredLabels &s);

// Average precision over positives in descending score order; equal scores
// keep input order. Throws Error(kDegenerateLabels) without positives.
double pr_auc(const ScoredLabels &s);

// F1 of (score >= threshold); 0 when there are no true or no predicted
// positives.
double f1_score(const ScoredLabels &s, double threshold);
// Mean per-task F1. threshold must lie in (0, 1).
double f1_mean(std::span<const ScoredLabels> tasks, double threshold = 0.5);

struct RegressionMetrics {
  double mse = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
};

// Throws Error(kLengthMismatch) or Error(kEmptySequence).
RegressionMetrics regression_metrics(std::span<const double> predicted,
                                     std::span<const double> truth);

enum class PoolMode { kAvg, kMax };

// Element-wise mean or max. Throws Error(kEmptySequence), Error(kDimMismatch).
std::vector<double> pool(std::span<const std::vector<double>> sequence,
                         PoolMode mode);

// Row-major embeddings with unique ids.
class EmbeddingMatrix {
public:
  EmbeddingMatrix() = default;
  // Throws Error(kDimMismatch) if values.size() != ids.size() * dim or
  // dim < 1, Error(kInvalidArgument) on duplicate ids.
  EmbeddingMatrix(std::vector<std::string> ids, std::size_t dim,
                  std::vector<double> values);

  const std::vector<std::string> &ids() const noexcept { return ids_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t rows() const noexcept { return ids_.size(); }
  std::span<const double> row(std::size_t i) const {
    return { values_.data() + i * dim_, dim_ };
  }
  // -1 when absent.
  long find(const std::string &id) const;

private:
  std::vector<std::string> ids_;
  std::size_t dim_ = 0;
  std::vector<double> values_;
  std::map<std::string, std::size_t> index_;
};

// Cosine similarity; 0 if either vector is zero.
double cosine(std::span<const double> a, std::span<const double> b);

struct RetrievalResult {
  double mrr = 0.0;
  std::map<int, double> recall_at;
  // Gold rank per query, queries in ascending id order.
  std::vector<std::pair<std::string, long>> ranks;
};

// Rank of the gold target among all targets by cosine similarity; equal
// similarities are ordered by target id ascending. Throws Error(kMissingId),
// Error(kDimMismatch), Error(kEmptyCorpus) for an empty gold map.
RetrievalResult retrieval_eval(const EmbeddingMatrix &queries,
                               const EmbeddingMatrix &targets,
                               const std::map<std::string, std::string> &gold,
                               std::span<const int> ks);

}  // namespace molbench
