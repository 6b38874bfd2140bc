//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace molbench {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

// Integer valence contribution; aromatic bonds count as one here and the
// missing half is accounted for per atom (see MolGraph::default_implicit_h).
int bond_valence(BondOrder order);

struct Atom {
  int atomic_number = 6;
  std::optional<int> isotope;
  int charge = 0;
  // Present iff the atom was written in brackets; holds its hydrogen count.
  std::optional<int> explicit_h;
  bool aromatic = false;
  // Stereo annotation ("@", "@@", ...). Carried through, never interpreted.
  std::string chirality;

  bool bracket() const noexcept { return explicit_h.has_value(); }
  std::string_view symbol() const;
};

struct Bond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::kSingle;
  // '/' or '\\' as written, or 0. Annotation only.
  char direction = 0;

  int other(int atom) const noexcept { return atom == begin ? end : begin; }
};

struct Neighbor {
  int atom;
  int bond;
};

// Immutable molecular graph. Ring membership, a minimum cycle basis, and
// implicit hydrogen counts are derived on construction.
class MolGraph {
public:
  MolGraph() = default;

  // Throws Error(kInvalidArgument) when a bond has equal or out-of-range
  // endpoints or an atom pair is bonded twice.
  MolGraph(std::vector<Atom> atoms, std::vector<Bond> bonds);

  const std::vector<Atom> &atoms() const noexcept { return atoms_; }
  const std::vector<Bond> &bonds() const noexcept { return bonds_; }
  const Atom &atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  const Bond &bond(int i) const { return bonds_[static_cast<std::size_t>(i)]; }

  int atom_count() const noexcept { return static_cast<int>(atoms_.size()); }
  int bond_count() const noexcept { return static_cast<int>(bonds_.size()); }
  bool empty() const noexcept { return atoms_.empty(); }

  std::span<const Neighbor> neighbors(int atom) const {
    return adjacency_[static_cast<std::size_t>(atom)];
  }
  int degree(int atom) const {
    return static_cast<int>(adjacency_[static_cast<std::size_t>(atom)].size());
  }
  std::optional<int> bond_between(int a, int b) const;

  // Cycle basis of minimum total length; each ring lists atoms in cycle order.
  const std::vector<std::vector<int>> &rings() const noexcept {
    return rings_;
  }
  bool in_ring(int atom) const {
    return ring_atom_[static_cast<std::size_t>(atom)];
  }
  bool ring_bond(int bond) const {
    return ring_bond_[static_cast<std::size_t>(bond)];
  }

  // Component id per atom, numbered by lowest atom index.
  const std::vector<int> &components() const noexcept { return component_; }
  int component_count() const noexcept { return component_count_; }

  // Sum of bond_valence over incident bonds, and how many of those are
  // aromatic.
  int bond_valence_sum(int atom) const;
  int aromatic_bond_count(int atom) const;

  // Hydrogens an unbracketed atom with this element, aromaticity and bonding
  // would carry. Evaluated for bracket atoms too (used by writers).
  int default_implicit_h(int atom) const;
  int implicit_h(int atom) const {
    return implicit_h_[static_cast<std::size_t>(atom)];
  }
  int total_h(int atom) const;

  // new_index[old] gives each atom's position in the result.
  MolGraph permuted(std::span<const int> new_index) const;
  // Atoms with keep[i] retained in original order, with their mutual bonds.
  MolGraph induced_subgraph(const std::vector<bool> &keep) const;

private:
  void derive();

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<std::vector<int>> rings_;
  std::vector<bool> ring_atom_;
  std::vector<bool> ring_bond_;
  std::vector<int> component_;
  int component_count_ = 0;
  std::vector<int> implicit_h_;
};

// True iff every atom's total valence is allowed for its element and charge
// and every aromatic atom sits in a ring.
bool is_valid(const MolGraph &g);

struct Descriptors {
  double mol_weight = 0.0;
  int aromatic_rings = 0;
  int heavy_atoms = 0;
  int rings = 0;
};

Descriptors descriptors(const MolGraph &g);

// Ring systems plus linkers, after repeatedly stripping non-ring atoms of
// degree <= 1. Acyclic input yields the empty graph.
MolGraph murcko_scaffold(const MolGraph &g);

// Replaces aromatic bonds with an alternating single/double assignment and
// clears aromatic flags. Hydrogen counts are preserved exactly. Throws
// Error(kUnsupportedFeature) if no assignment exists.
MolGraph kekulize(const MolGraph &g);

}  // namespace molbench
