//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "molbench/interpret.hpp"
#include "molbench/predmetrics.hpp"
#include "molbench/textmetrics.hpp"
#include "molbench/transition.hpp"

namespace molbench {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Throws Error(kIoError).
std::string read_file(const std::string &path);
// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

// Rounds to 6 significant digits, the precision of every report value.
double report_round(double value);

enum class ReportFormat { kJson, kMarkdown, kCsv };
std::optional<ReportFormat> parse_report_format(std::string_view name);

struct Report {
  std::string task;
  std::map<std::string, double> metrics;
  // Mean per-sentence scores, reported next to corpus-level ones.
  std::map<std::string, double> sentence_metrics;
  // Sample standard deviation across merged runs.
  std::map<std::string, double> metric_stds;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  std::map<std::string, std::size_t> skip_reasons;
  std::map<std::string, std::string> digests;  // input path -> SHA-256
};

// JSON with sorted keys and values rounded by report_round; ends in '\n'.
std::string render_report(const Report &r, ReportFormat format);
// Reads render_report JSON output. Throws Error(kFormatError).
Report parse_report_json(std::string_view text);

// Per-metric mean and sample std over repeated runs of one task. Throws
// Error(kEmptyCorpus), Error(kInvalidArgument) when tasks or metric sets differ.
Report merge_reports(std::span<const Report> runs);

// JSON-lines readers. Blank lines are skipped; every other line must be a
// JSON object of the documented shape, otherwise Error(kSchemaError) carries
// the 1-based line number. A file without records throws Error(kEmptyFile).

struct GenRecord {
  std::string id;
  Modality input_modality = Modality::kSmiles;
  Modality output_modality = Modality::kSmiles;
  std::string prediction;
  std::vector<std::string> references;
};

// {"id", "input_modality", "output_modality", "prediction", "references": [..]}
// ("reference": str is accepted for a single reference). Ids are unique.
std::vector<GenRecord> parse_gen_records(std::string_view text);

enum class TargetKind { kMolecule, kText };

// smiles, selfies, inchi and graph outputs are molecules; the rest text.
TargetKind default_target_kind(Modality output);

// Molecule bundle: bleu-2, bleu-4, exact-match, exact-match-raw, levenshtein,
// validity, rdk-fts, morgan-fts. Text bundle: bleu-2, bleu-4, rouge-1,
// rouge-2, rouge-l, meteor. Records are scored by `threads` workers and
// aggregated in record order.
Report eval_generation(std::span<const GenRecord> records, TargetKind kind,
                       unsigned threads = 1);

// Binary "EMB1" (u32 rows, u32 dim, f32 rows, newline-separated ids) or CSV
// (id followed by floats). Throws Error(kFormatError).
EmbeddingMatrix parse_embeddings(std::string_view bytes);
// {"query": str, "target": str} per line.
std::map<std::string, std::string> parse_gold(std::string_view text);

inline constexpr int kRetrievalKs[] = { 1, 5, 10 };

Report eval_retrieval(const EmbeddingMatrix &queries, const EmbeddingMatrix &targets,
                      const std::map<std::string, std::string> &gold);

struct PropertyData {
  std::vector<ScoredLabels> classification;  // one per task, task order
  std::vector<double> predicted;             // regression pairs
  std::vector<double> truth;
};

// {"task": str, "label": 0|1, "score": num} for classification or
// {"task": str, "target": num, "prediction": num} for regression.
PropertyData parse_property_records(std::string_view text);

// roc-auc and pr-auc are means over classification tasks; tasks with a
// single class are skipped and counted. f1 uses the given threshold.
Report eval_property(const PropertyData &data, double f1_threshold = 0.5);

// {"input": str, "output": str, "metric": str, "value": num}.
std::vector<TaskResult> parse_task_results(std::string_view text);

// {"input": str or [str], "output": str or [str]}; strings are tokenized
// with `scheme`, lists are taken as given.
std::vector<TokenPair> parse_token_pairs(std::string_view text, TokenScheme scheme);

// One token per line; '#' starts a comment line.
std::set<std::string> parse_stoplist(std::string_view text);
// Punctuation and SMILES/SELFIES syntax tokens.
std::set<std::string> default_stoplist();

// Mapping matrices as CSV: header of column tokens, one row per row token.
std::string export_mapping_matrix(const MappingMatrix &m);
// Throws Error(kFormatError).
MappingMatrix import_mapping_matrix(std::string_view csv);

struct ProfileRecord {
  std::string id;
  std::string smiles;
  std::optional<std::string> selfies;
  std::optional<std::string> iupac;
  std::optional<std::string> caption;
  std::optional<std::string> split;
};

// {"id", "smiles", optional "selfies", "iupac", "caption", "split"}.
std::vector<ProfileRecord> parse_profile_records(std::string_view text);

struct Summary {
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

Summary summarize(std::vector<double> values);

struct ProfileReport {
  std::size_t records = 0;
  // modality -> measure ("chars" or a token scheme) -> length -> count.
  std::map<std::string, std::map<std::string, std::map<std::size_t, std::size_t>>> lengths;
  // Murcko scaffold SMILES and molecule counts, most common first.
  std::vector<std::pair<std::string, std::size_t>> top_scaffolds;
  std::map<std::string, Summary> descriptors;
  std::map<std::string, std::size_t> split_counts;
  std::optional<bool> split_check;
  // Molecules left out of scaffold and descriptor statistics, with reason.
  std::vector<std::pair<std::string, std::string>> exclusions;
  std::map<std::string, std::string> digests;
};

inline constexpr double kSplitTolerance = 0.02;

// Expected split 8:1:1 over train/valid/test, each share within
// kSplitTolerance.
ProfileReport profile_dataset(std::span<const ProfileRecord> records);
std::string render_profile(const ProfileReport &p, ReportFormat format);

}  // namespace molbench
