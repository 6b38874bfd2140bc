//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <random>

#include <gtest/gtest.h>

#include "molbench/error.hpp"
#include "molbench/predmetrics.hpp"
#include "oracles.hpp"

namespace molbench {
namespace {

ScoredLabels scored(std::vector<int> labels, std::vector<double> scores) {
  return { std::move(labels), std::move(scores), "task" };
}

ErrorKind kind_of(auto &&call) {
  try {
    call();
  } catch (const Error &e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::kInvalidArgument;
}

TEST(RocAuc, Examples) {
  EXPECT_DOUBLE_EQ(roc_auc(scored({ 1, 1, 0, 0 }, { 0.9, 0.8, 0.3, 0.2 })), 1.0);
  EXPECT_DOUBLE_EQ(roc_auc(scored({ 1, 1, 0, 0 }, { 0.9, 0.2, 0.8, 0.1 })), 0.75);
  EXPECT_DOUBLE_EQ(roc_auc(scored({ 1, 0 }, { 0.5, 0.5 })), 0.5);
}

TEST(RocAuc, Errors) {
  EXPECT_EQ(kind_of([] { roc_auc(scored({ 1, 1 }, { 0.1, 0.2 })); }), ErrorKind::kDegenerateLabels);
  EXPECT_EQ(kind_of([] { roc_auc(scored({ 1, 0 }, { 0.1 })); }), ErrorKind::kLengthMismatch);
  EXPECT_EQ(kind_of([] { roc_auc(scored({}, {})); }), ErrorKind::kEmptySequence);
  EXPECT_EQ(kind_of([] { roc_auc(scored({ 2, 0 }, { 0.1, 0.2 })); }), ErrorKind::kInvalidArgument);
}

TEST(PrAuc, Examples) {
  EXPECT_DOUBLE_EQ(pr_auc(scored({ 1, 0 }, { 0.9, 0.1 })), 1.0);
  EXPECT_DOUBLE_EQ(pr_auc(scored({ 0, 1 }, { 0.9, 0.1 })), 0.5);
  EXPECT_DOUBLE_EQ(pr_auc(scored({ 1, 1, 1, 0, 0 }, { 0.9, 0.8, 0.7, 0.2, 0.1 })), 1.0);
  EXPECT_EQ(kind_of([] { pr_auc(scored({ 0, 0 }, { 0.9, 0.1 })); }), ErrorKind::kDegenerateLabels);
}

TEST(RankingMetrics, AgreeWithOracles) {
  std::mt19937_64 rng(59);
  std::uniform_int_distribution<int> size(2, 200);
  std::uniform_int_distribution<int> coarse(0, 9);
  for (int trial = 0; trial < 200; ++trial) {
    ScoredLabels s;
    const int n = size(rng);
    for (int i = 0; i < n; ++i) {
      s.labels.push_back(coarse(rng) < 4 ? 1 : 0);
      s.scores.push_back(coarse(rng) / 10.0);  // coarse scores force ties
    }
    s.labels[0] = 1;
    s.labels[1] = 0;
    ASSERT_NEAR(roc_auc(s), testing::oracle_roc_auc(s.labels, s.scores), 1e-9);
    ASSERT_NEAR(pr_auc(s), testing::oracle_pr_auc(s.labels, s.scores), 1e-9);
  }
}

TEST(F1, Examples) {
  const std::vector<ScoredLabels> perfect { scored({ 1, 0 }, { 0.9, 0.1 }) };
  EXPECT_DOUBLE_EQ(f1_mean(perfect), 1.0);
  EXPECT_DOUBLE_EQ(f1_score(scored({ 1, 1, 0 }, { 0.9, 0.2, 0.8 }), 0.5), 0.5);
  EXPECT_DOUBLE_EQ(f1_score(scored({ 1, 1, 0 }, { 0.1, 0.2, 0.3 }), 0.5), 0.0);
  const std::vector<ScoredLabels> two { scored({ 1, 0 }, { 0.9, 0.1 }), scored({ 1, 1, 0 }, { 0.9, 0.2, 0.8 }) };
  EXPECT_DOUBLE_EQ(f1_mean(two), 0.75);
  EXPECT_EQ(kind_of([&] { f1_mean(two, 1.0); }), ErrorKind::kInvalidArgument);
  EXPECT_EQ(kind_of([] { f1_mean(std::span<const ScoredLabels> {}); }), ErrorKind::kEmptySequence);
}

TEST(Regression, Examples) {
  const std::vector<double> same { 1.0, 2.0 };
  const RegressionMetrics zero = regression_metrics(same, same);
  EXPECT_EQ(zero.mse, 0.0);
  EXPECT_EQ(zero.rmse, 0.0);
  EXPECT_EQ(zero.mae, 0.0);
  const RegressionMetrics a = regression_metrics(std::vector<double> { 0, 2 }, std::vector<double> { 1, 1 });
  EXPECT_DOUBLE_EQ(a.mse, 1.0);
  EXPECT_DOUBLE_EQ(a.rmse, 1.0);
  EXPECT_DOUBLE_EQ(a.mae, 1.0);
  const RegressionMetrics b = regression_metrics(std::vector<double> { 3 }, std::vector<double> { 1 });
  EXPECT_DOUBLE_EQ(b.mse, 4.0);
  EXPECT_DOUBLE_EQ(b.rmse, 2.0);
  EXPECT_DOUBLE_EQ(b.mae, 2.0);
  EXPECT_EQ(kind_of([] { regression_metrics(std::vector<double> { 1 }, std::vector<double> {}); }),
            ErrorKind::kLengthMismatch);
}

TEST(Pool, Examples) {
  const std::vector<std::vector<double>> seq { { 1, 3 }, { 3, 5 } };
  EXPECT_EQ(pool(seq, PoolMode::kAvg), (std::vector<double> { 2, 4 }));
  EXPECT_EQ(pool(seq, PoolMode::kMax), (std::vector<double> { 3, 5 }));
  const std::vector<std::vector<double>> one { { 1.5, -2 } };
  EXPECT_EQ(pool(one, PoolMode::kAvg), one.front());
  EXPECT_EQ(pool(one, PoolMode::kMax), one.front());
  const std::vector<std::vector<double>> ragged { { 1 }, { 1, 2 } };
  EXPECT_EQ(kind_of([&] { pool(ragged, PoolMode::kAvg); }), ErrorKind::kDimMismatch);
}

// Targets on a unit circle; query q_k points at angle k so target ranks are
// controlled by angular distance.
EmbeddingMatrix circle(const std::vector<std::string> &ids, const std::vector<double> &angles) {
  std::vector<double> v;
  for (double a: angles) {
    v.push_back(std::cos(a));
    v.push_back(std::sin(a));
  }
  return EmbeddingMatrix(ids, 2, v);
}

TEST(Retrieval, GoldRanksGiveMrr) {
  std::vector<std::string> tids;
  std::vector<double> tangles;
  for (int t = 0; t < 12; ++t) {
    tids.push_back("t" + std::string(t < 10 ? "0" : "") + std::to_string(t));
    tangles.push_back(0.1 * t);
  }
  const EmbeddingMatrix targets = circle(tids, tangles);
  const EmbeddingMatrix queries = circle({ "q1", "q2", "q3" }, { 0.0, 0.0, 0.0 });
  // Nearest-first order is t00, t01, ...; gold at positions 1, 3 and 10.
  const std::map<std::string, std::string> gold { { "q1", "t00" }, { "q2", "t02" }, { "q3", "t09" } };
  const std::vector<int> ks { 1, 5, 10 };
  const RetrievalResult r = retrieval_eval(queries, targets, gold, ks);
  EXPECT_NEAR(r.mrr, (1.0 + 1.0 / 3.0 + 1.0 / 10.0) / 3.0, 1e-12);
  EXPECT_NEAR(r.mrr, 0.4778, 1e-4);
  EXPECT_NEAR(r.recall_at.at(1), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.recall_at.at(10), 1.0, 1e-12);
}

TEST(Retrieval, RecallCounting) {
  const EmbeddingMatrix targets = circle({ "a", "b", "c", "d", "e", "f" }, { 0, 0.1, 0.2, 0.3, 0.4, 0.5 });
  const EmbeddingMatrix queries = circle({ "q1", "q2" }, { 0, 0 });
  const std::vector<int> ks { 1, 5 };
  const RetrievalResult r = retrieval_eval(queries, targets, { { "q1", "b" }, { "q2", "f" } }, ks);
  EXPECT_DOUBLE_EQ(r.recall_at.at(1), 0.0);
  EXPECT_DOUBLE_EQ(r.recall_at.at(5), 0.5);
  EXPECT_EQ(r.ranks, (std::vector<std::pair<std::string, long>> { { "q1", 2 }, { "q2", 6 } }));
}

TEST(Retrieval, IdentityIsPerfect) {
  const EmbeddingMatrix m = circle({ "a", "b", "c" }, { 0, 1, 2 });
  const std::vector<int> ks { 1 };
  const RetrievalResult r = retrieval_eval(m, m, { { "a", "a" }, { "b", "b" }, { "c", "c" } }, ks);
  EXPECT_DOUBLE_EQ(r.mrr, 1.0);
  EXPECT_DOUBLE_EQ(r.recall_at.at(1), 1.0);
}

TEST(Retrieval, Errors) {
  const EmbeddingMatrix m = circle({ "a", "b" }, { 0, 1 });
  const std::vector<int> ks { 1 };
  EXPECT_EQ(kind_of([&] { retrieval_eval(m, m, { { "a", "zz" } }, ks); }), ErrorKind::kMissingId);
  const EmbeddingMatrix wide({ "a" }, 3, { 1, 2, 3 });
  EXPECT_EQ(kind_of([&] { retrieval_eval(wide, m, { { "a", "a" } }, ks); }), ErrorKind::kDimMismatch);
  EXPECT_EQ(kind_of([] { EmbeddingMatrix({ "a", "a" }, 1, { 1, 2 }); }), ErrorKind::kInvalidArgument);
  EXPECT_EQ(kind_of([] { EmbeddingMatrix({ "a" }, 2, { 1 }); }), ErrorKind::kDimMismatch);
}

TEST(Retrieval, AgreesWithOracle) {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int nt = std::uniform_int_distribution<int>(1, 200)(rng);
    const int nq = std::uniform_int_distribution<int>(1, 20)(rng);
    const std::size_t dim = 4;
    std::vector<std::string> tids;
    std::vector<std::vector<double>> tv;
    std::vector<double> flat_t;
    for (int t = 0; t < nt; ++t) {
      tids.push_back("t" + std::to_string(t));
      tv.emplace_back();
      for (std::size_t d = 0; d < dim; ++d) {
        tv.back().push_back(normal(rng));
        flat_t.push_back(tv.back().back());
      }
    }
    std::vector<std::string> qids;
    std::vector<std::vector<double>> qv;
    std::vector<double> flat_q;
    std::map<std::string, std::string> gold;
    for (int q = 0; q < nq; ++q) {
      qids.push_back("q" + std::to_string(q));
      qv.emplace_back();
      for (std::size_t d = 0; d < dim; ++d) {
        qv.back().push_back(normal(rng));
        flat_q.push_back(qv.back().back());
      }
      gold[qids.back()] = tids[std::uniform_int_distribution<std::size_t>(0, tids.size() - 1)(rng)];
    }
    const std::vector<int> ks { 1, 5, 10 };
    const RetrievalResult got =
        retrieval_eval(EmbeddingMatrix(qids, dim, flat_q), EmbeddingMatrix(tids, dim, flat_t), gold, ks);
    const testing::OracleRetrieval want = testing::oracle_retrieval(qids, qv, tids, tv, gold, ks);
    ASSERT_NEAR(got.mrr, want.mrr, 1e-9);
    for (int k: ks)
      ASSERT_NEAR(got.recall_at.at(k), want.recall_at.at(k), 1e-9);
  }
}

TEST(Cosine, ZeroVector) {
  const std::vector<double> z { 0, 0 };
  const std::vector<double> x { 1, 0 };
  EXPECT_EQ(cosine(z, x), 0.0);
  EXPECT_NEAR(cosine(x, x), 1.0, 1e-15);
}

}  // namespace
}  // namespace molbench
