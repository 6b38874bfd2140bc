//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbench/molgraph.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <set>
#include <string>
#include <utility>

#include "molbench/elements.hpp"
#include "molbench/error.hpp"

namespace molbench {

int bond_valence(BondOrder order) {
  switch (order) {
  case BondOrder::kSingle:
  case BondOrder::kAromatic:
    return 1;
  case BondOrder::kDouble:
    return 2;
  case BondOrder::kTriple:
    return 3;
  }
  return 1;
}

std::string_view Atom::symbol() const {
  return element(atomic_number).symbol;
}

MolGraph::MolGraph(std::vector<Atom> atoms, std::vector<Bond> bonds)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)) {
  const int n = atom_count();
  std::set<std::pair<int, int>> seen;
  for (const Bond &b: bonds_) {
    if (b.begin < 0 || b.end < 0 || b.begin >= n || b.end >= n)
      throw Error(ErrorKind::kInvalidArgument, "bond endpoint out of range");
    if (b.begin == b.end)
      throw Error(ErrorKind::kInvalidArgument, "bond joins an atom to itself");
    auto key = std::minmax(b.begin, b.end);
    if (!seen.insert(key).second)
      throw Error(ErrorKind::kInvalidArgument, "atom pair bonded twice");
  }
  for (const Atom &a: atoms_) {
    if (a.atomic_number < 0 || a.atomic_number > max_atomic_number())
      throw Error(ErrorKind::kInvalidArgument, "unknown atomic number");
    if (a.explicit_h && *a.explicit_h < 0)
      throw Error(ErrorKind::kInvalidArgument, "negative hydrogen count");
  }
  derive();
}

std::optional<int> MolGraph::bond_between(int a, int b) const {
  for (const Neighbor &nb: neighbors(a)) {
    if (nb.atom == b)
      return nb.bond;
  }
  return std::nullopt;
}

int MolGraph::bond_valence_sum(int atom) const {
  int sum = 0;
  for (const Neighbor &nb: neighbors(atom))
    sum += bond_valence(bond(nb.bond).order);
  return sum;
}

int MolGraph::aromatic_bond_count(int atom) const {
  int count = 0;
  for (const Neighbor &nb: neighbors(atom)) {
    if (bond(nb.bond).order == BondOrder::kAromatic)
      ++count;
  }
  return count;
}

int MolGraph::default_implicit_h(int i) const {
  const Atom &a = atom(i);
  if (a.atomic_number == 0)
    return 0;
  auto allowed = allowed_valences(a.atomic_number, a.charge);
  if (!allowed || allowed->empty())
    return 0;

  if (a.aromatic) {
    // One unit of valence goes to the pi system.
    const int h = allowed->front() - bond_valence_sum(i) - 1;
    return std::max(0, h);
  }

  const int arom = aromatic_bond_count(i);
  const int sum = bond_valence_sum(i) - arom + (3 * arom + 1) / 2;
  for (int v: *allowed) {
    if (v >= sum)
      return v - sum;
  }
  return 0;
}

int MolGraph::total_h(int i) const {
  const Atom &a = atom(i);
  return a.explicit_h ? *a.explicit_h : implicit_h(i);
}

MolGraph MolGraph::permuted(std::span<const int> new_index) const {
  const int n = atom_count();
  if (static_cast<int>(new_index.size()) != n)
    throw Error(ErrorKind::kInvalidArgument, "permutation size mismatch");
  std::vector<Atom> atoms(atoms_.size());
  std::vector<bool> used(atoms_.size(), false);
  for (int i = 0; i < n; ++i) {
    const int j = new_index[static_cast<std::size_t>(i)];
    if (j < 0 || j >= n || used[static_cast<std::size_t>(j)])
      throw Error(ErrorKind::kInvalidArgument, "not a permutation");
    used[static_cast<std::size_t>(j)] = true;
    atoms[static_cast<std::size_t>(j)] = atoms_[static_cast<std::size_t>(i)];
  }
  std::vector<Bond> bonds = bonds_;
  for (Bond &b: bonds) {
    b.begin = new_index[static_cast<std::size_t>(b.begin)];
    b.end = new_index[static_cast<std::size_t>(b.end)];
  }
  return MolGraph(std::move(atoms), std::move(bonds));
}

MolGraph MolGraph::induced_subgraph(const std::vector<bool> &keep) const {
  std::vector<int> index(atoms_.size(), -1);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i < keep.size() && keep[i]) {
      index[i] = static_cast<int>(atoms.size());
      atoms.push_back(atoms_[i]);
    }
  }
  std::vector<Bond> bonds;
  for (const Bond &b: bonds_) {
    const int u = index[static_cast<std::size_t>(b.begin)];
    const int v = index[static_cast<std::size_t>(b.end)];
    if (u >= 0 && v >= 0) {
      Bond nb = b;
      nb.begin = u;
      nb.end = v;
      bonds.push_back(nb);
    }
  }
  return MolGraph(std::move(atoms), std::move(bonds));
}

namespace {

// Bridges via iterative lowlink DFS; every non-bridge bond lies on a cycle.
std::vector<bool>
find_ring_bonds(int n, const std::vector<std::vector<Neighbor>> &adj,
                int bond_count) {
  std::vector<bool> ring(static_cast<std::size_t>(bond_count), true);
  std::vector<int> disc(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  int timer = 0;

  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };

  for (int root = 0; root < n; ++root) {
    if (disc[static_cast<std::size_t>(root)] >= 0)
      continue;
    std::vector<Frame> stack;
    stack.push_back({ root, -1, 0 });
    disc[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] =
        timer++;
    while (!stack.empty()) {
      Frame &f = stack.back();
      const auto &nbrs = adj[static_cast<std::size_t>(f.atom)];
      if (f.next < nbrs.size()) {
        const Neighbor nb = nbrs[f.next++];
        if (nb.bond == f.parent_bond)
          continue;
        auto &dv = disc[static_cast<std::size_t>(nb.atom)];
        if (dv < 0) {
          dv = low[static_cast<std::size_t>(nb.atom)] = timer++;
          stack.push_back({ nb.atom, nb.bond, 0 });
        } else {
          low[static_cast<std::size_t>(f.atom)] =
              std::min(low[static_cast<std::size_t>(f.atom)], dv);
        }
      } else {
        const Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          const int p = stack.back().atom;
          low[static_cast<std::size_t>(p)] =
              std::min(low[static_cast<std::size_t>(p)],
                       low[static_cast<std::size_t>(done.atom)]);
          if (low[static_cast<std::size_t>(done.atom)] >
              disc[static_cast<std::size_t>(p)])
            ring[static_cast<std::size_t>(done.parent_bond)] = false;
        }
      }
    }
  }
  return ring;
}

using EdgeSet = std::vector<std::uint64_t>;

struct Candidate {
  std::vector<int> atoms;  // cycle order
  EdgeSet edges;
  bool all_aromatic;
  std::vector<int> sorted_atoms;
};

bool xor_reduce(EdgeSet &v, const std::vector<std::pair<std::size_t, EdgeSet>>
                                &basis) {
  for (const auto &[pivot, row]: basis) {
    if ((v[pivot / 64] >> (pivot % 64)) & 1u) {
      for (std::size_t w = 0; w < v.size(); ++w)
        v[w] ^= row[w];
    }
  }
  for (std::uint64_t w: v) {
    if (w != 0)
      return true;
  }
  return false;
}

std::size_t lowest_bit(const EdgeSet &v) {
  for (std::size_t w = 0; w < v.size(); ++w) {
    if (v[w] != 0)
      return w * 64 + static_cast<std::size_t>(__builtin_ctzll(v[w]));
  }
  return 0;
}

}  // namespace

void MolGraph::derive() {
  const int n = atom_count();
  const int m = bond_count();
  adjacency_.assign(static_cast<std::size_t>(n), {});
  for (int b = 0; b < m; ++b) {
    const Bond &bd = bonds_[static_cast<std::size_t>(b)];
    adjacency_[static_cast<std::size_t>(bd.begin)].push_back({ bd.end, b });
    adjacency_[static_cast<std::size_t>(bd.end)].push_back({ bd.begin, b });
  }

  component_.assign(static_cast<std::size_t>(n), -1);
  component_count_ = 0;
  for (int s = 0; s < n; ++s) {
    if (component_[static_cast<std::size_t>(s)] >= 0)
      continue;
    std::deque<int> queue { s };
    component_[static_cast<std::size_t>(s)] = component_count_;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (const Neighbor &nb: adjacency_[static_cast<std::size_t>(u)]) {
        if (component_[static_cast<std::size_t>(nb.atom)] < 0) {
          component_[static_cast<std::size_t>(nb.atom)] = component_count_;
          queue.push_back(nb.atom);
        }
      }
    }
    ++component_count_;
  }

  ring_bond_ = find_ring_bonds(n, adjacency_, m);
  ring_atom_.assign(static_cast<std::size_t>(n), false);
  for (int b = 0; b < m; ++b) {
    if (ring_bond_[static_cast<std::size_t>(b)]) {
      ring_atom_[static_cast<std::size_t>(bonds_[static_cast<std::size_t>(b)].begin)] = true;
      ring_atom_[static_cast<std::size_t>(bonds_[static_cast<std::size_t>(b)].end)] = true;
    }
  }

  // Minimum cycle basis from Horton candidates: for every ring atom r and
  // ring bond (x, y), the cycle formed by shortest paths r..x, r..y.
  rings_.clear();
  const int cyclomatic = m - n + component_count_;
  if (cyclomatic > 0) {
    const std::size_t words = (static_cast<std::size_t>(m) + 63) / 64;
    std::vector<Candidate> candidates;
    std::set<EdgeSet> seen;
    constexpr int kUnseen = std::numeric_limits<int>::max();

    for (int r = 0; r < n; ++r) {
      if (!ring_atom_[static_cast<std::size_t>(r)])
        continue;
      std::vector<int> dist(static_cast<std::size_t>(n), kUnseen);
      std::vector<int> parent_bond(static_cast<std::size_t>(n), -1);
      std::deque<int> queue { r };
      dist[static_cast<std::size_t>(r)] = 0;
      while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (const Neighbor &nb: adjacency_[static_cast<std::size_t>(u)]) {
          if (!ring_bond_[static_cast<std::size_t>(nb.bond)])
            continue;
          if (dist[static_cast<std::size_t>(nb.atom)] == kUnseen) {
            dist[static_cast<std::size_t>(nb.atom)] =
                dist[static_cast<std::size_t>(u)] + 1;
            parent_bond[static_cast<std::size_t>(nb.atom)] = nb.bond;
            queue.push_back(nb.atom);
          }
        }
      }

      auto path_to_root = [&](int x) {
        std::vector<int> path { x };
        while (x != r) {
          x = bonds_[static_cast<std::size_t>(
                         parent_bond[static_cast<std::size_t>(x)])]
                  .other(x);
          path.push_back(x);
        }
        return path;
      };

      for (int b = 0; b < m; ++b) {
        if (!ring_bond_[static_cast<std::size_t>(b)])
          continue;
        const int x = bonds_[static_cast<std::size_t>(b)].begin;
        const int y = bonds_[static_cast<std::size_t>(b)].end;
        const int dx = dist[static_cast<std::size_t>(x)];
        const int dy = dist[static_cast<std::size_t>(y)];
        if (dx == kUnseen || dy == kUnseen || std::abs(dx - dy) > 1)
          continue;
        if (parent_bond[static_cast<std::size_t>(x)] == b ||
            parent_bond[static_cast<std::size_t>(y)] == b)
          continue;
        std::vector<int> px = path_to_root(x);
        std::vector<int> py = path_to_root(y);
        // Paths must meet only at r.
        std::set<int> on_px(px.begin(), px.end() - 1);
        bool disjoint = true;
        for (std::size_t k = 0; k + 1 < py.size(); ++k) {
          if (on_px.count(py[k]) != 0) {
            disjoint = false;
            break;
          }
        }
        if (!disjoint)
          continue;

        Candidate c;
        // r .. x, then y .. (before r)
        c.atoms.assign(px.rbegin(), px.rend());
        for (std::size_t k = 0; k + 1 < py.size(); ++k)
          c.atoms.push_back(py[k]);
        c.edges.assign(words, 0);
        for (std::size_t k = 0; k < c.atoms.size(); ++k) {
          const int u = c.atoms[k];
          const int v = c.atoms[(k + 1) % c.atoms.size()];
          const int e = *bond_between(u, v);
          c.edges[static_cast<std::size_t>(e) / 64] |=
              std::uint64_t { 1 } << (static_cast<std::size_t>(e) % 64);
        }
        if (!seen.insert(c.edges).second)
          continue;
        c.all_aromatic = std::all_of(c.atoms.begin(), c.atoms.end(), [&](int a) {
          return atoms_[static_cast<std::size_t>(a)].aromatic;
        });
        c.sorted_atoms = c.atoms;
        std::sort(c.sorted_atoms.begin(), c.sorted_atoms.end());
        candidates.push_back(std::move(c));
      }
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate &a, const Candidate &b) {
                if (a.atoms.size() != b.atoms.size())
                  return a.atoms.size() < b.atoms.size();
                if (a.all_aromatic != b.all_aromatic)
                  return a.all_aromatic;
                return a.sorted_atoms < b.sorted_atoms;
              });

    std::vector<std::pair<std::size_t, EdgeSet>> basis;
    for (Candidate &c: candidates) {
      if (static_cast<int>(basis.size()) == cyclomatic)
        break;
      EdgeSet v = c.edges;
      if (!xor_reduce(v, basis))
        continue;
      const std::size_t pivot = lowest_bit(v);
      for (auto &[p, row]: basis) {
        if ((row[pivot / 64] >> (pivot % 64)) & 1u) {
          for (std::size_t w = 0; w < words; ++w)
            row[w] ^= v[w];
        }
      }
      basis.emplace_back(pivot, std::move(v));
      rings_.push_back(std::move(c.atoms));
    }
  }

  implicit_h_.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    if (!atoms_[static_cast<std::size_t>(i)].bracket())
      implicit_h_[static_cast<std::size_t>(i)] = default_implicit_h(i);
  }
}

bool is_valid(const MolGraph &g) {
  for (int i = 0; i < g.atom_count(); ++i) {
    const Atom &a = g.atom(i);
    if (a.aromatic && !g.in_ring(i))
      return false;
    auto allowed = allowed_valences(a.atomic_number, a.charge);
    if (!allowed || a.atomic_number == 0)
      continue;

    const int h = g.total_h(i);
    const int arom = g.aromatic_bond_count(i);
    if (a.aromatic) {
      const int base = g.bond_valence_sum(i) + h;
      const bool ok = std::any_of(allowed->begin(), allowed->end(),
                                  [&](int v) { return v == base || v == base + 1; });
      if (!ok)
        return false;
    } else {
      const int val = g.bond_valence_sum(i) - arom + (3 * arom + 1) / 2 + h;
      if (std::find(allowed->begin(), allowed->end(), val) == allowed->end())
        return false;
    }
  }
  return true;
}

Descriptors descriptors(const MolGraph &g) {
  constexpr double kHydrogen = 1.008;
  Descriptors d;
  for (int i = 0; i < g.atom_count(); ++i) {
    const Atom &a = g.atom(i);
    d.mol_weight += a.isotope ? static_cast<double>(*a.isotope)
                              : element(a.atomic_number).weight;
    d.mol_weight += kHydrogen * g.total_h(i);
    if (a.atomic_number != 1)
      ++d.heavy_atoms;
  }
  d.rings = static_cast<int>(g.rings().size());
  for (const auto &ring: g.rings()) {
    if (std::all_of(ring.begin(), ring.end(),
                    [&](int a) { return g.atom(a).aromatic; }))
      ++d.aromatic_rings;
  }
  return d;
}

MolGraph murcko_scaffold(const MolGraph &g) {
  const int n = g.atom_count();
  std::vector<bool> keep(static_cast<std::size_t>(n), true);
  std::vector<int> degree(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    degree[static_cast<std::size_t>(i)] = g.degree(i);

  std::deque<int> queue;
  for (int i = 0; i < n; ++i) {
    if (!g.in_ring(i) && degree[static_cast<std::size_t>(i)] <= 1)
      queue.push_back(i);
  }
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    if (!keep[static_cast<std::size_t>(i)])
      continue;
    keep[static_cast<std::size_t>(i)] = false;
    for (const Neighbor &nb: g.neighbors(i)) {
      if (!keep[static_cast<std::size_t>(nb.atom)])
        continue;
      if (--degree[static_cast<std::size_t>(nb.atom)] <= 1 &&
          !g.in_ring(nb.atom))
        queue.push_back(nb.atom);
    }
  }

  // Each lost bond becomes hydrogen on the kept atom (one per bond on
  // aromatic atoms, whose ring keeps the pi electrons). Atoms whose implicit
  // count does not come out that way get an explicit count.
  std::vector<int> target_h;
  std::vector<bool> lost_any;
  for (int i = 0; i < n; ++i) {
    if (!keep[static_cast<std::size_t>(i)])
      continue;
    int lost = 0;
    for (const Neighbor &nb: g.neighbors(i)) {
      if (!keep[static_cast<std::size_t>(nb.atom)])
        lost += g.atom(i).aromatic ? 1 : bond_valence(g.bond(nb.bond).order);
    }
    target_h.push_back(g.total_h(i) + lost);
    lost_any.push_back(lost > 0);
  }
  MolGraph core = g.induced_subgraph(keep);
  std::vector<Atom> atoms = core.atoms();
  bool changed = false;
  for (int i = 0; i < core.atom_count(); ++i) {
    if (!lost_any[static_cast<std::size_t>(i)])
      continue;
    Atom &a = atoms[static_cast<std::size_t>(i)];
    a.chirality.clear();
    const int want = target_h[static_cast<std::size_t>(i)];
    if (core.default_implicit_h(i) == want && is_organic_subset(a.atomic_number) &&
        a.charge == 0 && !a.isotope)
      a.explicit_h.reset();
    else
      a.explicit_h = want;
    changed = true;
  }
  return changed ? MolGraph(std::move(atoms), core.bonds()) : core;
}

namespace {

bool needs_pi_bond(const MolGraph &g, int i) {
  const Atom &a = g.atom(i);
  auto allowed = allowed_valences(a.atomic_number, a.charge);
  if (!allowed || allowed->empty())
    return false;
  const int used = g.bond_valence_sum(i) + g.total_h(i);
  for (int v: *allowed) {
    if (v >= used)
      return v - used >= 1;
  }
  return false;
}

// Backtracking perfect matching over candidate pi bonds.
bool match_pi_bonds(const MolGraph &g, const std::vector<bool> &needs,
                    std::vector<bool> &matched, std::vector<bool> &is_double) {
  int best = -1;
  std::vector<int> best_options;
  for (int i = 0; i < g.atom_count(); ++i) {
    if (!needs[static_cast<std::size_t>(i)] || matched[static_cast<std::size_t>(i)])
      continue;
    std::vector<int> options;
    for (const Neighbor &nb: g.neighbors(i)) {
      if (g.bond(nb.bond).order == BondOrder::kAromatic &&
          needs[static_cast<std::size_t>(nb.atom)] &&
          !matched[static_cast<std::size_t>(nb.atom)])
        options.push_back(nb.bond);
    }
    if (options.empty())
      return false;
    if (best < 0 || options.size() < best_options.size()) {
      best = i;
      best_options = std::move(options);
    }
  }
  if (best < 0)
    return true;

  for (int b: best_options) {
    const int other = g.bond(b).other(best);
    matched[static_cast<std::size_t>(best)] = true;
    matched[static_cast<std::size_t>(other)] = true;
    is_double[static_cast<std::size_t>(b)] = true;
    if (match_pi_bonds(g, needs, matched, is_double))
      return true;
    matched[static_cast<std::size_t>(best)] = false;
    matched[static_cast<std::size_t>(other)] = false;
    is_double[static_cast<std::size_t>(b)] = false;
  }
  return false;
}

}  // namespace

MolGraph kekulize(const MolGraph &g) {
  const int n = g.atom_count();
  bool any = false;
  for (const Atom &a: g.atoms())
    any = any || a.aromatic;
  for (const Bond &b: g.bonds())
    any = any || b.order == BondOrder::kAromatic;
  if (!any)
    return g;

  std::vector<bool> needs(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    if (g.atom(i).aromatic && g.aromatic_bond_count(i) > 0)
      needs[static_cast<std::size_t>(i)] = needs_pi_bond(g, i);
  }
  std::vector<bool> matched(static_cast<std::size_t>(n), false);
  std::vector<bool> is_double(static_cast<std::size_t>(g.bond_count()), false);
  if (!match_pi_bonds(g, needs, matched, is_double))
    throw Error(ErrorKind::kUnsupportedFeature,
                "aromatic system has no Kekule assignment");

  std::vector<Bond> bonds = g.bonds();
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    if (bonds[b].order == BondOrder::kAromatic)
      bonds[b].order = is_double[b] ? BondOrder::kDouble : BondOrder::kSingle;
  }
  std::vector<Atom> atoms = g.atoms();
  for (Atom &a: atoms)
    a.aromatic = false;

  MolGraph out(atoms, bonds);
  bool fixed = false;
  for (int i = 0; i < n; ++i) {
    if (out.total_h(i) != g.total_h(i)) {
      atoms[static_cast<std::size_t>(i)].explicit_h = g.total_h(i);
      fixed = true;
    }
  }
  return fixed ? MolGraph(std::move(atoms), std::move(bonds)) : out;
}

}  // namespace molbench
