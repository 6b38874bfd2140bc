//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbench/transition.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "molbench/error.hpp"

namespace molbench {
namespace {

constexpr std::array<std::string_view, kModalityCount> kNames {
  "smiles", "inchi", "selfies", "graph", "image", "iupac", "caption", "property",
};

bool is_bleu(std::string_view metric) { return metric.substr(0, 4) == "bleu"; }

bool is_regression(std::string_view metric) {
  return metric == "mse" || metric == "rmse" || metric == "mae";
}

struct Aggregate {
  std::string metric;
  double sum = 0.0;
  int count = 0;
  double mean() const { return sum / count; }
};

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c: line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

}  // namespace

std::string_view modality_name(Modality m) {
  return kNames[static_cast<std::size_t>(m)];
}

Modality parse_modality(std::string_view name) {
  for (std::size_t i = 0; i < kModalityCount; ++i) {
    if (kNames[i] == name)
      return kAllModalities[i];
  }
  throw Error(ErrorKind::kUnknownModality, "unknown modality '" + std::string(name) + "'");
}

bool is_internal(Modality m) {
  return m == Modality::kSmiles || m == Modality::kInchi || m == Modality::kSelfies ||
         m == Modality::kGraph;
}

std::string_view cell_rule_name(CellRule rule) {
  switch (rule) {
  case CellRule::kMissing: return "missing";
  case CellRule::kIdentity: return "identity";
  case CellRule::kZero: return "zero";
  case CellRule::kTool: return "tool";
  case CellRule::kMeasured: return "measured";
  }
  return "missing";
}

TransitionMatrix build_matrix(std::span<const TaskResult> results) {
  std::map<std::pair<Modality, Modality>, Aggregate> measured;
  for (const TaskResult &r: results) {
    if (!std::isfinite(r.value))
      throw Error(ErrorKind::kInvalidArgument, "result value is not finite");
    if (r.output == Modality::kProperty && is_regression(r.metric))
      throw Error(ErrorKind::kInvalidArgument,
                  "regression metric '" + r.metric + "' cannot fill a probability cell");
    Aggregate &agg = measured[{ r.input, r.output }];
    if (agg.count > 0 && agg.metric != r.metric)
      throw Error(ErrorKind::kConflictingResults,
                  "cell " + std::string(modality_name(r.input)) + "->" +
                      std::string(modality_name(r.output)) + " has metrics '" + agg.metric +
                      "' and '" + r.metric + "'");
    agg.metric = r.metric;
    agg.sum += std::clamp(r.value, 0.0, 1.0);
    agg.count += 1;
  }

  TransitionMatrix m;
  for (Modality row: kAllModalities) {
    // Row-wide value for internal targets from SMILES generation.
    const Aggregate *row_bleu = nullptr;
    auto it = measured.find({ row, Modality::kSmiles });
    if (row != Modality::kSmiles && it != measured.end() && is_bleu(it->second.metric))
      row_bleu = &it->second;

    for (Modality col: kAllModalities) {
      TransitionCell &cell = m.at(row, col);
      const bool internal_target =
          is_internal(col) || (row == Modality::kGraph && col == Modality::kImage);
      if (row == col) {
        cell = { 1.0, CellRule::kIdentity, {} };
      } else if (row == Modality::kProperty) {
        cell = { 0.0, CellRule::kZero, {} };
      } else if (row_bleu != nullptr && internal_target) {
        cell = { row_bleu->mean(), CellRule::kMeasured, row_bleu->metric };
      } else if (is_internal(row) && internal_target) {
        cell = { 1.0, CellRule::kTool, {} };
      } else if (auto found = measured.find({ row, col }); found != measured.end()) {
        cell = { found->second.mean(), CellRule::kMeasured, found->second.metric };
      }
    }
  }
  return m;
}

std::string export_matrix(const TransitionMatrix &m) {
  std::ostringstream out;
  for (Modality col: kAllModalities)
    out << ',' << modality_name(col);
  out << '\n';
  for (Modality row: kAllModalities) {
    out << modality_name(row);
    for (Modality col: kAllModalities) {
      out << ',';
      if (const auto &v = m.at(row, col).value) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", *v);
        out << buf;
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string export_provenance(const TransitionMatrix &m) {
  std::ostringstream out;
  for (Modality col: kAllModalities)
    out << ',' << modality_name(col);
  out << '\n';
  for (Modality row: kAllModalities) {
    out << modality_name(row);
    for (Modality col: kAllModalities) {
      const TransitionCell &cell = m.at(row, col);
      out << ',' << cell_rule_name(cell.rule);
      if (cell.rule == CellRule::kMeasured)
        out << ':' << cell.metric;
    }
    out << '\n';
  }
  return out.str();
}

TransitionMatrix import_matrix(std::string_view csv) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < csv.size()) {
    std::size_t end = csv.find('\n', start);
    if (end == std::string_view::npos)
      end = csv.size();
    if (end > start)
      lines.push_back(csv.substr(start, end - start));
    start = end + 1;
  }
  if (lines.empty())
    throw Error(ErrorKind::kFormatError, "empty matrix CSV");
  const auto header = split_csv_line(lines[0]);
  if (header.empty() || !header[0].empty())
    throw Error(ErrorKind::kFormatError, "matrix CSV header must start with an empty cell", 1);
  std::vector<Modality> cols;
  for (std::size_t k = 1; k < header.size(); ++k)
    cols.push_back(parse_modality(header[k]));

  TransitionMatrix m;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = split_csv_line(lines[li]);
    if (fields.size() != header.size())
      throw Error(ErrorKind::kFormatError, "matrix CSV row has wrong field count", li + 1);
    const Modality row = parse_modality(fields[0]);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const std::string &f = fields[k];
      if (f.empty())
        continue;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw Error(ErrorKind::kFormatError, "bad matrix value '" + f + "'", li + 1);
      const Modality col = cols[k - 1];
      m.at(row, col) = { v, row == col ? CellRule::kIdentity : CellRule::kMeasured, {} };
    }
  }
  return m;
}

}  // namespace molbench
