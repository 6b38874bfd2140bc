//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <string_view>

#include "molbench/molgraph.hpp"

namespace molbench {

// Atom order follows token order. Surrounding whitespace is ignored.
// Throws Error with the byte offset of the offending character.
MolGraph parse_smiles(std::string_view text);

// Deterministic SMILES independent of input atom order. Stereo marks are
// dropped. Throws Error(kUnsupportedFeature) for atoms the writer cannot
// spell (an aromatic element without a lowercase symbol).
std::string canonical_smiles(const MolGraph &g);

// parse_smiles succeeds and is_valid holds.
bool is_valid_smiles(std::string_view text);

}  // namespace molbench
