//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace molbench {

struct ElementInfo {
  int atomic_number;
  std::string_view symbol;
  double weight;  // standard atomic weight, g/mol
};

// Atomic number 0 is the SMILES wildcard '*'.
const ElementInfo *find_element(std::string_view symbol);
const ElementInfo &element(int atomic_number);
int max_atomic_number();

// Organic-subset symbols that may appear outside brackets.
bool is_organic_subset(int atomic_number);
// Elements with a lowercase aromatic spelling (b c n o p s, plus se/as in
// brackets).
bool has_aromatic_symbol(int atomic_number);

// Allowed total valences for an element at a given formal charge, ascending.
// std::nullopt means the element is outside the valence table and is not
// constrained. An empty vector means no valence is possible.
std::optional<std::vector<int>> allowed_valences(int atomic_number,
                                                 int charge);

}  // namespace molbench
