//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <atomic>
#include <thread>

#include "molbench/error.hpp"
#include "molbench/fingerprint.hpp"
#include "molbench/harness.hpp"
#include "molbench/molgraph.hpp"
#include "molbench/selfies.hpp"
#include "molbench/smiles.hpp"

namespace molbench {
namespace {

constexpr int kPathLength = 7;
constexpr int kMorganRadius = 2;

// Scores of one record; absent entries do not enter the mean.
struct RecordScores {
  std::map<std::string, double> values;
  std::optional<std::string> skip_reason;
};

TokenScheme molecule_scheme(Modality m) {
  if (m == Modality::kSmiles)
    return TokenScheme::kSmilesRegex;
  if (m == Modality::kSelfies)
    return TokenScheme::kSelfiesBracket;
  return TokenScheme::kChar;
}

// Valid molecule graph for SMILES or SELFIES text; empty otherwise.
std::optional<MolGraph> read_molecule(const std::string &text, Modality m) {
  try {
    MolGraph g = m == Modality::kSmiles ? parse_smiles(text) : decode_selfies_string(text);
    if (g.empty() || !is_valid(g))
      return std::nullopt;
    return g;
  } catch (const Error &) {
    return std::nullopt;
  }
}

std::optional<std::string> canonical_or_empty(const MolGraph &g) {
  try {
    return canonical_smiles(g);
  } catch (const Error &) {
    return std::nullopt;
  }
}

std::vector<Tokens> tokenize_all(std::span<const std::string> texts, TokenScheme scheme) {
  std::vector<Tokens> out;
  for (const std::string &t: texts)
    out.push_back(tokenize(t, scheme).tokens);
  return out;
}

RecordScores score_molecule(const GenRecord &r) {
  RecordScores s;
  const TokenScheme scheme = molecule_scheme(r.output_modality);
  const Tokens cand = tokenize(r.prediction, scheme).tokens;
  const std::vector<Tokens> refs = tokenize_all(r.references, scheme);
  s.values["bleu-2"] = sentence_bleu(cand, refs, 2);
  s.values["bleu-4"] = sentence_bleu(cand, refs, 4);
  s.values["exact-match-raw"] =
      std::any_of(r.references.begin(), r.references.end(),
                  [&](const std::string &ref) { return exact_match_raw(r.prediction, ref); })
          ? 1.0
          : 0.0;
  s.values["levenshtein"] = static_cast<double>(levenshtein(r.prediction, r.references.front()));

  if (r.output_modality != Modality::kSmiles && r.output_modality != Modality::kSelfies) {
    s.skip_reason = "opaque-output-modality";
    return s;
  }
  const std::optional<MolGraph> pred = read_molecule(r.prediction, r.output_modality);
  s.values["validity"] = pred ? 1.0 : 0.0;
  const std::optional<MolGraph> ref = read_molecule(r.references.front(), r.output_modality);
  if (!ref) {
    s.skip_reason = "invalid-reference-molecule";
    return s;
  }
  double exact = 0.0;
  double rdk = 0.0;
  double morgan = 0.0;
  if (pred) {
    const auto a = canonical_or_empty(*pred);
    const auto b = canonical_or_empty(*ref);
    exact = a && b && *a == *b ? 1.0 : 0.0;
    rdk = tanimoto(path_fp(*pred, kPathLength), path_fp(*ref, kPathLength));
    morgan = tanimoto(morgan_fp(*pred, kMorganRadius), morgan_fp(*ref, kMorganRadius));
  }
  s.values["exact-match"] = exact;
  s.values["rdk-fts"] = rdk;
  s.values["morgan-fts"] = morgan;
  return s;
}

double best_over(std::span<const Tokens> refs, auto score) {
  double best = 0.0;
  for (const Tokens &ref: refs)
    best = std::max(best, score(ref));
  return best;
}

RecordScores score_text(const GenRecord &r) {
  RecordScores s;
  const Tokens cand = tokenize(r.prediction, TokenScheme::kWhitespace).tokens;
  const std::vector<Tokens> refs = tokenize_all(r.references, TokenScheme::kWhitespace);
  s.values["bleu-2"] = sentence_bleu(cand, refs, 2);
  s.values["bleu-4"] = sentence_bleu(cand, refs, 4);
  if (cand.empty()) {
    for (const char *name: { "rouge-1", "rouge-2", "rouge-l", "meteor" })
      s.values[name] = 0.0;
    return s;
  }
  auto guarded = [&](auto metric) {
    return best_over(refs, [&](const Tokens &ref) { return ref.empty() ? 0.0 : metric(ref); });
  };
  s.values["rouge-1"] = guarded([&](const Tokens &ref) { return rouge(cand, ref, RougeVariant::kR1); });
  s.values["rouge-2"] = guarded([&](const Tokens &ref) { return rouge(cand, ref, RougeVariant::kR2); });
  s.values["rouge-l"] = guarded([&](const Tokens &ref) { return rouge(cand, ref, RougeVariant::kRL); });
  s.values["meteor"] = guarded([&](const Tokens &ref) { return meteor_lite(cand, ref); });
  return s;
}

}  // namespace

TargetKind default_target_kind(Modality output) {
  return is_internal(output) ? TargetKind::kMolecule : TargetKind::kText;
}

Report eval_generation(std::span<const GenRecord> records, TargetKind kind, unsigned threads) {
  if (records.empty())
    throw Error(ErrorKind::kEmptyFile, "no generation records");
  std::vector<RecordScores> scores(records.size());
  std::atomic<std::size_t> next { 0 };
  auto work = [&] {
    for (std::size_t k = next++; k < records.size(); k = next++)
      scores[k] = kind == TargetKind::kMolecule ? score_molecule(records[k])
                                                : score_text(records[k]);
  };
  const unsigned workers = std::clamp(threads, 1u, 64u);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back(work);
  }

  Report report;
  report.task = kind == TargetKind::kMolecule ? "generation-molecule" : "generation-text";
  report.evaluated = records.size();

  std::map<std::string, std::pair<double, std::size_t>> sums;
  for (const RecordScores &s: scores) {
    for (const auto &[name, v]: s.values) {
      sums[name].first += v;
      sums[name].second += 1;
    }
    if (s.skip_reason) {
      ++report.skipped;
      ++report.skip_reasons[*s.skip_reason];
    }
  }
  for (const auto &[name, acc]: sums) {
    const double mean = acc.first / static_cast<double>(acc.second);
    if (name == "bleu-2" || name == "bleu-4")
      report.sentence_metrics[name] = mean;
    else
      report.metrics[name] = mean;
  }

  // Corpus BLEU over every record.
  std::vector<Tokens> cands;
  std::vector<std::vector<Tokens>> refs;
  for (const GenRecord &r: records) {
    const TokenScheme scheme =
        kind == TargetKind::kMolecule ? molecule_scheme(r.output_modality) : TokenScheme::kWhitespace;
    cands.push_back(tokenize(r.prediction, scheme).tokens);
    refs.push_back(tokenize_all(r.references, scheme));
  }
  report.metrics["bleu-2"] = corpus_bleu(cands, refs, 2);
  report.metrics["bleu-4"] = corpus_bleu(cands, refs, 4);
  return report;
}

Report eval_retrieval(const EmbeddingMatrix &queries, const EmbeddingMatrix &targets,
                      const std::map<std::string, std::string> &gold) {
  const RetrievalResult r = retrieval_eval(queries, targets, gold, kRetrievalKs);
  Report report;
  report.task = "retrieval";
  report.evaluated = r.ranks.size();
  report.metrics["mrr"] = r.mrr;
  for (const auto &[k, recall]: r.recall_at)
    report.metrics["r@" + std::to_string(k)] = recall;
  return report;
}

Report eval_property(const PropertyData &data, double f1_threshold) {
  if (data.classification.empty() && data.truth.empty())
    throw Error(ErrorKind::kEmptyFile, "no property records");
  Report report;
  report.task = "property";
  if (!data.classification.empty()) {
    double roc = 0.0;
    double pr = 0.0;
    std::size_t scored = 0;
    for (const ScoredLabels &task: data.classification) {
      report.evaluated += task.labels.size();
      try {
        roc += roc_auc(task);
        pr += pr_auc(task);
        ++scored;
      } catch (const Error &e) {
        if (e.kind() != ErrorKind::kDegenerateLabels)
          throw;
        report.skipped += task.labels.size();
        report.skip_reasons["single-class-task"] += task.labels.size();
      }
    }
    if (scored > 0) {
      report.metrics["roc-auc"] = roc / static_cast<double>(scored);
      report.metrics["pr-auc"] = pr / static_cast<double>(scored);
    }
    report.metrics["f1"] = f1_mean(data.classification, f1_threshold);
  }
  if (!data.truth.empty()) {
    const RegressionMetrics m = regression_metrics(data.predicted, data.truth);
    report.evaluated += data.truth.size();
    report.metrics["mse"] = m.mse;
    report.metrics["rmse"] = m.rmse;
    report.metrics["mae"] = m.mae;
  }
  return report;
}

}  // namespace molbench
