//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbench/fingerprint.hpp"

#include <algorithm>
#include <bit>
#include <utility>

#include "molbench/error.hpp"

namespace molbench {

Fingerprint::Fingerprint(FingerprintKind kind, int parameter, int width)
    : kind_(kind), parameter_(parameter), width_(width) {
  if (width < 64 || !std::has_single_bit(static_cast<unsigned>(width)))
    throw Error(ErrorKind::kInvalidArgument,
                "fingerprint width must be a power of two >= 64");
  words_.assign(static_cast<std::size_t>(width) / 64, 0);
}

bool Fingerprint::test(int bit) const {
  return ((words_.at(static_cast<std::size_t>(bit) / 64) >> (bit % 64)) & 1u) != 0;
}

void Fingerprint::set(int bit) {
  words_.at(static_cast<std::size_t>(bit) / 64) |= std::uint64_t { 1 } << (bit % 64);
}

int Fingerprint::popcount() const {
  int n = 0;
  for (std::uint64_t w: words_)
    n += std::popcount(w);
  return n;
}

std::vector<int> Fingerprint::on_bits() const {
  std::vector<int> out;
  for (int b = 0; b < width_; ++b) {
    if (test(b))
      out.push_back(b);
  }
  return out;
}

void Fnv1a::add(std::int32_t value) {
  auto u = static_cast<std::uint32_t>(value);
  for (int i = 0; i < 4; ++i) {
    hash_ ^= u & 0xffu;
    hash_ *= 1099511628211ull;
    u >>= 8;
  }
}

void Fnv1a::add64(std::uint64_t value) {
  add(static_cast<std::int32_t>(static_cast<std::uint32_t>(value)));
  add(static_cast<std::int32_t>(static_cast<std::uint32_t>(value >> 32)));
}

std::set<std::uint64_t> morgan_features(const MolGraph &g, int radius) {
  if (radius < 0 || radius > 6)
    throw Error(ErrorKind::kInvalidArgument, "Morgan radius must be in [0, 6]");
  const auto n = static_cast<std::size_t>(g.atom_count());
  std::vector<std::uint64_t> codes(n);
  std::set<std::uint64_t> features;
  for (int i = 0; i < g.atom_count(); ++i) {
    const Atom &a = g.atom(i);
    Fnv1a h;
    h.add(a.atomic_number);
    h.add(g.degree(i));
    h.add(a.charge);
    h.add(g.total_h(i));
    h.add(g.in_ring(i) ? 1 : 0);
    h.add(a.aromatic ? 1 : 0);
    codes[static_cast<std::size_t>(i)] = h.value();
    features.insert(h.value());
  }
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next(n);
    for (int i = 0; i < g.atom_count(); ++i) {
      std::vector<std::pair<int, std::uint64_t>> env;
      for (const Neighbor &nb: g.neighbors(i))
        env.emplace_back(static_cast<int>(g.bond(nb.bond).order),
                         codes[static_cast<std::size_t>(nb.atom)]);
      std::sort(env.begin(), env.end());
      Fnv1a h;
      h.add(r);
      h.add64(codes[static_cast<std::size_t>(i)]);
      for (const auto &[order, code]: env) {
        h.add(order);
        h.add64(code);
      }
      next[static_cast<std::size_t>(i)] = h.value();
      features.insert(h.value());
    }
    codes = std::move(next);
  }
  return features;
}

namespace {

void extend_paths(const MolGraph &g, std::vector<int> &atoms,
                  std::vector<int> &orders, std::vector<bool> &on_path,
                  int max_len, std::set<std::uint64_t> &features) {
  const int last = atoms.back();
  for (const Neighbor &nb: g.neighbors(last)) {
    if (on_path[static_cast<std::size_t>(nb.atom)])
      continue;
    atoms.push_back(nb.atom);
    orders.push_back(static_cast<int>(g.bond(nb.bond).order));
    on_path[static_cast<std::size_t>(nb.atom)] = true;

    // Label sequence: atom, bond, atom, ..., read in both directions.
    std::vector<int> forward;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const Atom &a = g.atom(atoms[k]);
      forward.push_back(a.atomic_number * 2 + (a.aromatic ? 1 : 0));
      if (k < orders.size())
        forward.push_back(orders[k]);
    }
    std::vector<int> backward(forward.rbegin(), forward.rend());
    const std::vector<int> &canon = std::min(forward, backward);
    Fnv1a h;
    h.add(static_cast<std::int32_t>(orders.size()));
    for (int v: canon)
      h.add(v);
    features.insert(h.value());

    if (static_cast<int>(orders.size()) < max_len)
      extend_paths(g, atoms, orders, on_path, max_len, features);
    on_path[static_cast<std::size_t>(nb.atom)] = false;
    orders.pop_back();
    atoms.pop_back();
  }
}

}  // namespace

std::set<std::uint64_t> path_features(const MolGraph &g, int max_len) {
  if (max_len < 1 || max_len > 7)
    throw Error(ErrorKind::kInvalidArgument, "path length must be in [1, 7]");
  std::set<std::uint64_t> features;
  std::vector<bool> on_path(static_cast<std::size_t>(g.atom_count()), false);
  for (int start = 0; start < g.atom_count(); ++start) {
    std::vector<int> atoms { start };
    std::vector<int> orders;
    on_path[static_cast<std::size_t>(start)] = true;
    extend_paths(g, atoms, orders, on_path, max_len, features);
    on_path[static_cast<std::size_t>(start)] = false;
  }
  return features;
}

Fingerprint fold_features(const std::set<std::uint64_t> &features,
                          FingerprintKind kind, int parameter, int width) {
  Fingerprint fp(kind, parameter, width);
  for (std::uint64_t f: features)
    fp.set(static_cast<int>(f % static_cast<std::uint64_t>(width)));
  return fp;
}

Fingerprint morgan_fp(const MolGraph &g, int radius, int width) {
  return fold_features(morgan_features(g, radius), FingerprintKind::kMorgan,
                       radius, width);
}

Fingerprint path_fp(const MolGraph &g, int max_len, int width) {
  return fold_features(path_features(g, max_len), FingerprintKind::kPath,
                       max_len, width);
}

double tanimoto(const Fingerprint &a, const Fingerprint &b) {
  if (a.width() != b.width())
    throw Error(ErrorKind::kWidthMismatch, "fingerprint widths differ");
  if (a.kind() != b.kind() || a.parameter() != b.parameter())
    throw Error(ErrorKind::kKindMismatch, "fingerprint kinds differ");
  int both = 0;
  int either = 0;
  for (int bit = 0; bit < a.width(); ++bit) {
    const bool x = a.test(bit);
    const bool y = b.test(bit);
    both += x && y ? 1 : 0;
    either += x || y ? 1 : 0;
  }
  return either == 0 ? 1.0 : static_cast<double>(both) / either;
}

double tanimoto(const std::set<std::uint64_t> &a,
                const std::set<std::uint64_t> &b) {
  std::size_t both = 0;
  for (std::uint64_t f: a)
    both += b.count(f);
  const std::size_t either = a.size() + b.size() - both;
  return either == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace molbench
