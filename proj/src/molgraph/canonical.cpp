//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "molbench/elements.hpp"
#include "molbench/error.hpp"
#include "molbench/smiles.hpp"

namespace molbench {
namespace {

using Ranks = std::vector<int>;

int bond_code(BondOrder order) {
  return static_cast<int>(order);
}

// Rank = number of atoms with a strictly smaller key.
template <class Key>
Ranks ranks_from_keys(const std::vector<Key> &keys) {
  std::vector<int> order(keys.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)];
  });
  Ranks ranks(keys.size(), 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto i = static_cast<std::size_t>(order[k]);
    if (k > 0 && keys[static_cast<std::size_t>(order[k - 1])] == keys[i])
      ranks[i] = ranks[static_cast<std::size_t>(order[k - 1])];
    else
      ranks[i] = static_cast<int>(k);
  }
  return ranks;
}

int class_count(const Ranks &ranks) {
  return static_cast<int>(std::set<int>(ranks.begin(), ranks.end()).size());
}

Ranks refine(const MolGraph &g, Ranks ranks) {
  int classes = class_count(ranks);
  for (;;) {
    std::vector<std::pair<int, std::vector<std::pair<int, int>>>> keys;
    keys.reserve(ranks.size());
    for (int i = 0; i < g.atom_count(); ++i) {
      std::vector<std::pair<int, int>> nbrs;
      for (const Neighbor &nb: g.neighbors(i))
        nbrs.emplace_back(bond_code(g.bond(nb.bond).order),
                          ranks[static_cast<std::size_t>(nb.atom)]);
      std::sort(nbrs.begin(), nbrs.end());
      keys.emplace_back(ranks[static_cast<std::size_t>(i)], std::move(nbrs));
    }
    Ranks next = ranks_from_keys(keys);
    const int next_classes = class_count(next);
    ranks = std::move(next);
    if (next_classes == classes)
      return ranks;
    classes = next_classes;
  }
}

Ranks initial_ranks(const MolGraph &g) {
  std::vector<std::tuple<int, int, int, int, int, bool, bool>> keys;
  for (int i = 0; i < g.atom_count(); ++i) {
    const Atom &a = g.atom(i);
    keys.emplace_back(a.atomic_number, a.isotope.value_or(-1), g.degree(i),
                      a.charge, g.total_h(i), g.in_ring(i), a.aromatic);
  }
  return ranks_from_keys(keys);
}

std::string atom_text(const MolGraph &g, int i) {
  const Atom &a = g.atom(i);
  const int h = g.total_h(i);
  std::string sym(a.symbol());
  if (a.aromatic) {
    if (!has_aromatic_symbol(a.atomic_number))
      throw Error(ErrorKind::kUnsupportedFeature,
                  "no aromatic spelling for element " + sym);
    sym[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(sym[0])));
  }
  const bool organic_spelling =
      is_organic_subset(a.atomic_number) &&
      (!a.aromatic || sym.size() == 1);
  if (organic_spelling && a.charge == 0 && !a.isotope &&
      h == g.default_implicit_h(i))
    return sym;

  std::string out = "[";
  if (a.isotope)
    out += std::to_string(*a.isotope);
  out += sym;
  if (h > 0) {
    out += 'H';
    if (h > 1)
      out += std::to_string(h);
  }
  if (a.charge != 0) {
    out += a.charge > 0 ? '+' : '-';
    const int mag = a.charge > 0 ? a.charge : -a.charge;
    if (mag > 1)
      out += std::to_string(mag);
  }
  out += ']';
  return out;
}

std::string bond_text(const MolGraph &g, int b) {
  const Bond &bond = g.bond(b);
  const bool both_aromatic =
      g.atom(bond.begin).aromatic && g.atom(bond.end).aromatic;
  switch (bond.order) {
  case BondOrder::kSingle:
    return both_aromatic ? "-" : "";
  case BondOrder::kDouble:
    return "=";
  case BondOrder::kTriple:
    return "#";
  case BondOrder::kAromatic:
    // Outside rings the parser would read an implicit bond as single.
    return both_aromatic && g.ring_bond(b) ? "" : ":";
  }
  return "";
}

std::string ring_label(int digit) {
  if (digit < 10)
    return std::to_string(digit);
  return "%" + std::to_string(digit);
}

// Writes SMILES for a total ranking (all ranks distinct).
class Writer {
public:
  Writer(const MolGraph &g, const Ranks &ranks) : g_(g), ranks_(ranks) {
    const auto n = static_cast<std::size_t>(g.atom_count());
    preorder_.assign(n, -1);
    children_.assign(n, {});
    ring_bonds_.assign(n, {});
    parent_bond_.assign(n, -1);
    sorted_nbrs_.resize(n);
    for (int i = 0; i < g.atom_count(); ++i) {
      auto nbrs = std::vector<Neighbor>(g.neighbors(i).begin(), g.neighbors(i).end());
      std::sort(nbrs.begin(), nbrs.end(), [&](const Neighbor &x, const Neighbor &y) {
        return ranks_[static_cast<std::size_t>(x.atom)] <
               ranks_[static_cast<std::size_t>(y.atom)];
      });
      sorted_nbrs_[static_cast<std::size_t>(i)] = std::move(nbrs);
    }
  }

  std::string write() {
    std::vector<int> atoms(static_cast<std::size_t>(g_.atom_count()));
    for (std::size_t i = 0; i < atoms.size(); ++i)
      atoms[i] = static_cast<int>(i);
    std::sort(atoms.begin(), atoms.end(), [&](int a, int b) {
      return ranks_[static_cast<std::size_t>(a)] < ranks_[static_cast<std::size_t>(b)];
    });
    std::string out;
    for (int root: atoms) {
      if (preorder_[static_cast<std::size_t>(root)] >= 0)
        continue;
      layout(root);
      if (!out.empty())
        out += '.';
      emit(root, out);
    }
    return out;
  }

private:
  void layout(int root) {
    std::vector<bool> ring_seen(static_cast<std::size_t>(g_.bond_count()), false);
    struct Frame {
      int atom;
      std::size_t next;
    };
    std::vector<Frame> stack { { root, 0 } };
    preorder_[static_cast<std::size_t>(root)] = counter_++;
    while (!stack.empty()) {
      Frame &f = stack.back();
      const auto &nbrs = sorted_nbrs_[static_cast<std::size_t>(f.atom)];
      if (f.next >= nbrs.size()) {
        stack.pop_back();
        continue;
      }
      const Neighbor nb = nbrs[f.next++];
      if (nb.bond == parent_bond_[static_cast<std::size_t>(f.atom)])
        continue;
      if (preorder_[static_cast<std::size_t>(nb.atom)] < 0) {
        preorder_[static_cast<std::size_t>(nb.atom)] = counter_++;
        parent_bond_[static_cast<std::size_t>(nb.atom)] = nb.bond;
        children_[static_cast<std::size_t>(f.atom)].push_back(nb);
        stack.push_back({ nb.atom, 0 });
      } else if (!ring_seen[static_cast<std::size_t>(nb.bond)]) {
        ring_seen[static_cast<std::size_t>(nb.bond)] = true;
        ring_bonds_[static_cast<std::size_t>(f.atom)].push_back(nb);
        ring_bonds_[static_cast<std::size_t>(nb.atom)].push_back({ f.atom, nb.bond });
      }
    }
  }

  void emit(int v, std::string &out) {
    out += atom_text(g_, v);

    auto &rings = ring_bonds_[static_cast<std::size_t>(v)];
    std::vector<Neighbor> closing;
    std::vector<Neighbor> opening;
    for (const Neighbor &nb: rings) {
      if (open_digit_.count(nb.bond) != 0)
        closing.push_back(nb);
      else
        opening.push_back(nb);
    }
    auto by_preorder = [&](const Neighbor &x, const Neighbor &y) {
      return preorder_[static_cast<std::size_t>(x.atom)] <
             preorder_[static_cast<std::size_t>(y.atom)];
    };
    std::sort(closing.begin(), closing.end(), by_preorder);
    std::sort(opening.begin(), opening.end(), by_preorder);

    std::vector<int> released;
    for (const Neighbor &nb: closing) {
      const int digit = open_digit_[nb.bond];
      out += ring_label(digit);
      open_digit_.erase(nb.bond);
      released.push_back(digit);
    }
    for (const Neighbor &nb: opening) {
      int digit = 1;
      while (used_digits_.count(digit) != 0)
        ++digit;
      if (digit > 99)
        throw Error(ErrorKind::kUnsupportedFeature, "more than 99 open rings");
      used_digits_.insert(digit);
      open_digit_[nb.bond] = digit;
      out += bond_text(g_, nb.bond);
      out += ring_label(digit);
    }
    for (int d: released)
      used_digits_.erase(d);

    const auto &kids = children_[static_cast<std::size_t>(v)];
    for (std::size_t k = 0; k < kids.size(); ++k) {
      const bool last = k + 1 == kids.size();
      if (!last)
        out += '(';
      out += bond_text(g_, kids[k].bond);
      emit(kids[k].atom, out);
      if (!last)
        out += ')';
    }
  }

  const MolGraph &g_;
  const Ranks &ranks_;
  std::vector<std::vector<Neighbor>> sorted_nbrs_;
  std::vector<int> preorder_;
  std::vector<int> parent_bond_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<Neighbor>> ring_bonds_;
  std::map<int, int> open_digit_;
  std::set<int> used_digits_;
  int counter_ = 0;
};

// Atoms u, v with the same neighbourhood (apart from each other) and the
// same bond orders to it are interchangeable by an automorphism.
bool twins(const MolGraph &g, int u, int v) {
  std::vector<std::pair<int, int>> nu;
  std::vector<std::pair<int, int>> nv;
  for (const Neighbor &nb: g.neighbors(u)) {
    if (nb.atom != v)
      nu.emplace_back(nb.atom, bond_code(g.bond(nb.bond).order));
  }
  for (const Neighbor &nb: g.neighbors(v)) {
    if (nb.atom != u)
      nv.emplace_back(nb.atom, bond_code(g.bond(nb.bond).order));
  }
  std::sort(nu.begin(), nu.end());
  std::sort(nv.begin(), nv.end());
  return nu == nv;
}

void search(const MolGraph &g, const Ranks &ranks,
            std::optional<std::string> &best) {
  const int n = g.atom_count();
  // Smallest rank shared by two or more atoms.
  std::map<int, std::vector<int>> cells;
  for (int i = 0; i < n; ++i)
    cells[ranks[static_cast<std::size_t>(i)]].push_back(i);
  const std::vector<int> *target = nullptr;
  for (const auto &[rank, members]: cells) {
    if (members.size() > 1) {
      target = &members;
      break;
    }
  }
  if (target == nullptr) {
    std::string s = Writer(g, ranks).write();
    if (!best || s < *best)
      best = std::move(s);
    return;
  }

  std::vector<int> tried;
  for (int v: *target) {
    bool redundant = false;
    for (int u: tried) {
      if (twins(g, u, v)) {
        redundant = true;
        break;
      }
    }
    if (redundant)
      continue;
    tried.push_back(v);
    Ranks next(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i)
      next[i] = 2 * ranks[i] + 1;
    next[static_cast<std::size_t>(v)] = 2 * ranks[static_cast<std::size_t>(v)];
    search(g, refine(g, ranks_from_keys(next)), best);
  }
}

}  // namespace

std::string canonical_smiles(const MolGraph &g) {
  if (g.empty())
    return "";
  std::optional<std::string> best;
  search(g, refine(g, initial_ranks(g)), best);
  return *best;
}

}  // namespace molbench
