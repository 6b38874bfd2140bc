//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace molbench {

enum class ErrorKind {
  // SMILES parsing
  kEmptyInput,
  kUnbalancedParenthesis,
  kUnclosedRingBond,
  kUnknownElement,
  kBadBracketAtom,
  kSyntax,
  kUnsupportedFeature,
  // SELFIES
  kEmptyStream,
  kNotEncodable,
  kStrayCharacter,
  // fingerprints
  kWidthMismatch,
  kKindMismatch,
  // metrics
  kLengthMismatch,
  kEmptyCorpus,
  kDegenerateLabels,
  kEmptySequence,
  kDimMismatch,
  kMissingId,
  // transition matrix
  kConflictingResults,
  kUnknownModality,
  // interpretation
  kTooFewTokens,
  kDegenerateMatrix,
  // harness
  kSchemaError,
  kEmptyFile,
  kFormatError,
  kIoError,
  kInvalidArgument,
};

std::string_view error_kind_name(ErrorKind kind);

// Exception carrying a machine-readable kind. `position` is a byte offset for
// parsers and a 1-based line number for record readers.
class Error: public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &message,
        std::optional<std::size_t> position = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> position() const noexcept { return position_; }

private:
  ErrorKind kind_;
  std::optional<std::size_t> position_;
};

}  // namespace molbench
