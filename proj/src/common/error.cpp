//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbench/error.hpp"

namespace molbench {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::kEmptyInput:
    return "EmptyInput";
  case ErrorKind::kUnbalancedParenthesis:
    return "UnbalancedParenthesis";
  case ErrorKind::kUnclosedRingBond:
    return "UnclosedRingBond";
  case ErrorKind::kUnknownElement:
    return "UnknownElement";
  case ErrorKind::kBadBracketAtom:
    return "BadBracketAtom";
  case ErrorKind::kSyntax:
    return "Syntax";
  case ErrorKind::kUnsupportedFeature:
    return "UnsupportedFeature";
  case ErrorKind::kEmptyStream:
    return "EmptyStream";
  case ErrorKind::kNotEncodable:
    return "NotEncodable";
  case ErrorKind::kStrayCharacter:
    return "StrayCharacter";
  case ErrorKind::kWidthMismatch:
    return "WidthMismatch";
  case ErrorKind::kKindMismatch:
    return "KindMismatch";
  case ErrorKind::kLengthMismatch:
    return "LengthMismatch";
  case ErrorKind::kEmptyCorpus:
    return "EmptyCorpus";
  case ErrorKind::kDegenerateLabels:
    return "DegenerateLabels";
  case ErrorKind::kEmptySequence:
    return "EmptySequence";
  case ErrorKind::kDimMismatch:
    return "DimMismatch";
  case ErrorKind::kMissingId:
    return "MissingId";
  case ErrorKind::kConflictingResults:
    return "ConflictingResults";
  case ErrorKind::kUnknownModality:
    return "UnknownModality";
  case ErrorKind::kTooFewTokens:
    return "TooFewTokens";
  case ErrorKind::kDegenerateMatrix:
    return "DegenerateMatrix";
  case ErrorKind::kSchemaError:
    return "SchemaError";
  case ErrorKind::kEmptyFile:
    return "EmptyFile";
  case ErrorKind::kFormatError:
    return "FormatError";
  case ErrorKind::kIoError:
    return "IoError";
  case ErrorKind::kInvalidArgument:
    return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string &message,
             std::optional<std::size_t> position)
    : std::runtime_error(message), kind_(kind), position_(position) { }

}  // namespace molbench
