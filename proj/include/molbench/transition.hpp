//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace molbench {

enum class Modality { kSmiles, kInchi, kSelfies, kGraph, kImage, kIupac, kCaption, kProperty };

inline constexpr std::size_t kModalityCount = 8;
inline constexpr std::array<Modality, kModalityCount> kAllModalities {
  Modality::kSmiles, Modality::kInchi,   Modality::kSelfies, Modality::kGraph,
  Modality::kImage,  Modality::kIupac,   Modality::kCaption, Modality::kProperty,
};

std::string_view modality_name(Modality m);
// Throws Error(kUnknownModality).
Modality parse_modality(std::string_view name);
// smiles, inchi, selfies and graph.
bool is_internal(Modality m);

struct TaskResult {
  Modality input = Modality::kSmiles;
  Modality output = Modality::kSmiles;
  std::string metric;
  double value = 0.0;
};

enum class CellRule { kMissing, kIdentity, kZero, kTool, kMeasured };

struct TransitionCell {
  std::optional<double> value;
  CellRule rule = CellRule::kMissing;
  std::string metric;  // set for kMeasured
};

class TransitionMatrix {
public:
  TransitionCell &at(Modality row, Modality col) {
    return cells_[index(row) * kModalityCount + index(col)];
  }
  const TransitionCell &at(Modality row, Modality col) const {
    return cells_[index(row) * kModalityCount + index(col)];
  }

private:
  static std::size_t index(Modality m) { return static_cast<std::size_t>(m); }
  std::array<TransitionCell, kModalityCount * kModalityCount> cells_ {};
};

// Fill rules in priority order: identity, zero (property row to any other
// modality), tool (internal to internal and graph to image, 1.0; replaced by
// the row's measured SMILES-generation BLEU when one exists), measured,
// missing. Duplicate results for one cell are averaged; values are clamped to
// [0, 1]. Throws Error(kConflictingResults) when one cell receives different
// metric names, Error(kInvalidArgument) for non-finite values or regression
// metrics targeting property.
TransitionMatrix build_matrix(std::span<const TaskResult> results);

std::string_view cell_rule_name(CellRule rule);

// Values with three fractional digits, missing cells empty.
std::string export_matrix(const TransitionMatrix &m);
// Parallel CSV of rule tags ("measured:<metric>" for measured cells).
std::string export_provenance(const TransitionMatrix &m);
// Reads export_matrix output; rules are kMeasured for present off-diagonal
// values. Throws Error(kFormatError) or Error(kUnknownModality).
TransitionMatrix import_matrix(std::string_view csv);

}  // namespace molbench
