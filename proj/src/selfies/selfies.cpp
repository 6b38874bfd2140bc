//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbench/selfies.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <map>
#include <optional>
#include <utility>

#include "molbench/elements.hpp"
#include "molbench/error.hpp"

namespace molbench {
namespace {

constexpr std::array<std::string_view, 16> kIndexAlphabet = {
  "[C]",       "[Ring1]",   "[Ring2]",   "[Branch1]", "[=Branch1]", "[#Branch1]",
  "[Branch2]", "[=Branch2]", "[#Branch2]", "[O]",       "[N]",        "[=N]",
  "[=C]",      "[#C]",       "[S]",       "[P]",
};

// Capacity of atoms whose element has no valence table entry.
constexpr int kUnconstrainedCapacity = 8;

int bond_char_order(char c) {
  switch (c) {
  case '=':
    return 2;
  case '#':
    return 3;
  default:
    return 1;
  }
}

struct RingOrBranch {
  int order;
  int length;  // number of index tokens
};

// [Ring1], [=Ring2], [-/Ring1], [Branch3], ...
std::optional<RingOrBranch> parse_structural(std::string_view body,
                                             std::string_view word) {
  const std::size_t at = body.find(word);
  if (at == std::string_view::npos || at + word.size() + 1 != body.size())
    return std::nullopt;
  const char digit = body.back();
  if (digit < '1' || digit > '3')
    return std::nullopt;
  const std::string_view prefix = body.substr(0, at);
  int order = 1;
  if (prefix.empty()) {
    order = 1;
  } else if (prefix == "=" || prefix == "#") {
    order = bond_char_order(prefix[0]);
  } else if (word == "Ring" && prefix.size() == 2 &&
             std::string_view("-/\\").find(prefix[0]) != std::string_view::npos &&
             std::string_view("-/\\").find(prefix[1]) != std::string_view::npos &&
             prefix != "--") {
    order = 1;
  } else {
    return std::nullopt;
  }
  return RingOrBranch { order, digit - '0' };
}

struct AtomSpec {
  int order = 1;
  Atom atom;
  int capacity = 0;
};

// [<bond><isotope><Element><@|@@><H<d>><+n|-n>]
std::optional<AtomSpec> parse_atom(std::string_view text) {
  if (text.size() < 3 || text.front() != '[' || text.back() != ']')
    return std::nullopt;
  std::string_view body = text.substr(1, text.size() - 2);
  AtomSpec spec;
  std::size_t p = 0;
  if (p < body.size() && std::string_view("=#/\\").find(body[p]) !=
                             std::string_view::npos) {
    spec.order = bond_char_order(body[p]);
    ++p;
  }
  const std::string_view rest = body.substr(p);

  std::size_t q = p;
  int isotope = -1;
  while (q < body.size() && std::isdigit(static_cast<unsigned char>(body[q]))) {
    isotope = (isotope < 0 ? 0 : isotope) * 10 + (body[q] - '0');
    if (isotope > 9999)
      return std::nullopt;
    ++q;
  }
  if (q >= body.size() || !std::isupper(static_cast<unsigned char>(body[q])))
    return std::nullopt;
  std::size_t sym_len = 1;
  if (q + 1 < body.size() && std::islower(static_cast<unsigned char>(body[q + 1])))
    sym_len = 2;
  const ElementInfo *e = find_element(body.substr(q, sym_len));
  if (e == nullptr || e->atomic_number == 0)
    return std::nullopt;
  q += sym_len;
  std::size_t chiral = 0;
  while (q < body.size() && body[q] == '@' && chiral < 2) {
    ++q;
    ++chiral;
  }
  int h = 0;
  if (q < body.size() && body[q] == 'H') {
    if (q + 1 >= body.size() || !std::isdigit(static_cast<unsigned char>(body[q + 1])))
      return std::nullopt;
    h = body[q + 1] - '0';
    q += 2;
  }
  int charge = 0;
  if (q < body.size() && (body[q] == '+' || body[q] == '-')) {
    const int sign = body[q] == '+' ? 1 : -1;
    ++q;
    int mag = 0;
    std::size_t digits = 0;
    while (q < body.size() && body[q] >= '1' && body[q] <= '9' && digits < 2) {
      mag = mag * 10 + (body[q] - '0');
      ++q;
      ++digits;
    }
    if (digits == 0)
      return std::nullopt;
    charge = sign * mag;
  }
  if (q != body.size())
    return std::nullopt;

  spec.atom.atomic_number = e->atomic_number;
  const bool organic = is_organic_subset(e->atomic_number) &&
                       rest == e->symbol;
  int max_valence = kUnconstrainedCapacity;
  auto allowed = allowed_valences(e->atomic_number, charge);
  if (allowed) {
    if (allowed->empty())
      return std::nullopt;
    max_valence = allowed->back();
  }
  if (organic) {
    spec.capacity = max_valence;
  } else {
    if (isotope >= 0)
      spec.atom.isotope = isotope;
    spec.atom.charge = charge;
    spec.atom.explicit_h = h;
    spec.capacity = max_valence - h;
  }
  if (spec.capacity < 0)
    return std::nullopt;
  return spec;
}

class Decoder {
public:
  explicit Decoder(const SelfiesStream &s) : tokens_(s.tokens) { }

  MolGraph run() {
    derive(std::numeric_limits<std::size_t>::max(), 0, -1);
    form_rings();
    fill_hydrogens();
    return MolGraph(std::move(atoms_), std::move(bonds_));
  }

private:
  // Mirrors the published derivation: returns the number of tokens consumed.
  std::size_t derive(std::size_t max_derive, int init_state, int root) {
    std::size_t n_derived = 0;
    std::optional<int> state = init_state;
    int prev = root;

    while (state && n_derived < max_derive) {
      if (pos_ >= tokens_.size())
        break;
      const std::string &text = tokens_[pos_++].text;
      ++n_derived;
      std::optional<int> next = state;
      const std::string_view body =
          text.size() >= 2 ? std::string_view(text).substr(1, text.size() - 2)
                           : std::string_view();

      if (auto br = parse_structural(body, "Branch")) {
        if (*state > 1) {
          const int binit = std::min(*state - 1, br->order);
          next = *state - binit;
          const std::size_t q = read_index(br->length);
          n_derived += static_cast<std::size_t>(br->length);
          n_derived += derive(q + 1, binit, prev);
        }
      } else if (auto ring = parse_structural(body, "Ring")) {
        if (*state > 0) {
          const int order = std::min(ring->order, *state);
          const int left = *state - order;
          next = left == 0 ? std::nullopt : std::optional<int>(left);
          const std::size_t q = read_index(ring->length);
          n_derived += static_cast<std::size_t>(ring->length);
          const long lidx = std::max<long>(0, static_cast<long>(prev) -
                                                  static_cast<long>(q + 1));
          rings_.push_back({ static_cast<int>(lidx), prev, order });
        }
      } else if (body == "epsilon") {
        next = *state == 0 ? std::optional<int>(0) : std::nullopt;
      } else if (auto spec = parse_atom(text)) {
        const int order =
            *state == 0 ? 0 : std::min({ spec->order, *state, spec->capacity });
        const int left = spec->capacity - order;
        next = left == 0 ? std::nullopt : std::optional<int>(left);
        if (order > 0 || *state == 0) {
          const int idx = static_cast<int>(atoms_.size());
          atoms_.push_back(spec->atom);
          capacity_.push_back(spec->capacity);
          used_.push_back(0);
          if (order > 0)
            add_bond(prev, idx, order);
          prev = idx;
        }
      }
      // Anything else is a no-op.
      state = next;
    }

    while (n_derived < max_derive && pos_ < tokens_.size()) {
      ++pos_;
      ++n_derived;
    }
    return n_derived;
  }

  std::size_t read_index(int length) {
    std::size_t value = 0;
    for (int i = 0; i < length; ++i) {
      int code = 0;
      if (pos_ < tokens_.size())
        code = selfies_index_code(tokens_[pos_++].text);
      value = value * kIndexAlphabet.size() + static_cast<std::size_t>(code);
    }
    return value;
  }

  void add_bond(int a, int b, int order) {
    Bond bond;
    bond.begin = a;
    bond.end = b;
    bond.order = static_cast<BondOrder>(order);
    bond_index_[std::minmax(a, b)] = static_cast<int>(bonds_.size());
    bonds_.push_back(bond);
    used_[static_cast<std::size_t>(a)] += order;
    used_[static_cast<std::size_t>(b)] += order;
  }

  void form_rings() {
    for (const Ring &r: rings_) {
      if (r.left == r.right)
        continue;
      const int lfree = capacity_[static_cast<std::size_t>(r.left)] -
                        used_[static_cast<std::size_t>(r.left)];
      const int rfree = capacity_[static_cast<std::size_t>(r.right)] -
                        used_[static_cast<std::size_t>(r.right)];
      if (lfree <= 0 || rfree <= 0)
        continue;
      const int order = std::min({ r.order, lfree, rfree });
      auto it = bond_index_.find(std::minmax(r.left, r.right));
      if (it == bond_index_.end()) {
        add_bond(r.left, r.right, order);
        continue;
      }
      Bond &bond = bonds_[static_cast<std::size_t>(it->second)];
      const int old = static_cast<int>(bond.order);
      const int now = std::min(old + order, 3);
      bond.order = static_cast<BondOrder>(now);
      used_[static_cast<std::size_t>(r.left)] += now - old;
      used_[static_cast<std::size_t>(r.right)] += now - old;
    }
  }

  // Bracket atoms take enough hydrogens to reach an allowed valence.
  void fill_hydrogens() {
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      Atom &a = atoms_[i];
      if (!a.bracket())
        continue;
      auto allowed = allowed_valences(a.atomic_number, a.charge);
      if (!allowed)
        continue;
      const int total = used_[i] + *a.explicit_h;
      for (int v: *allowed) {
        if (v >= total) {
          a.explicit_h = v - used_[i];
          break;
        }
      }
    }
  }

  struct Ring {
    int left;
    int right;
    int order;
  };

  const std::vector<SelfiesToken> &tokens_;
  std::size_t pos_ = 0;
  std::vector<Atom> atoms_;
  std::vector<int> capacity_;
  std::vector<int> used_;
  std::vector<Bond> bonds_;
  std::map<std::pair<int, int>, int> bond_index_;
  std::vector<Ring> rings_;
};

std::vector<std::string> index_tokens(std::size_t q, int length) {
  std::vector<std::string> out(static_cast<std::size_t>(length));
  for (int i = length - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = std::string(kIndexAlphabet[q % 16]);
    q /= 16;
  }
  return out;
}

int index_length(std::size_t q) {
  if (q < 16)
    return 1;
  if (q < 256)
    return 2;
  if (q < 4096)
    return 3;
  throw Error(ErrorKind::kNotEncodable, "ring or branch span too long");
}

std::string bond_prefix(int order) {
  switch (order) {
  case 2:
    return "=";
  case 3:
    return "#";
  default:
    return "";
  }
}

class Encoder {
public:
  explicit Encoder(const MolGraph &g) : g_(g) {
    const auto n = static_cast<std::size_t>(g.atom_count());
    preorder_.assign(n, -1);
    children_.assign(n, {});
    closings_.assign(n, {});
  }

  SelfiesStream run() {
    for (int i = 0; i < g_.atom_count(); ++i)
      check_atom(i);
    layout();
    SelfiesStream out;
    for (std::string &t: emit(0, 0))
      out.tokens.push_back(make_selfies_token(std::move(t)));
    return out;
  }

private:
  void check_atom(int i) const {
    const Atom &a = g_.atom(i);
    if (a.atomic_number == 0)
      throw Error(ErrorKind::kNotEncodable, "wildcard atom");
    if (g_.total_h(i) > 9)
      throw Error(ErrorKind::kNotEncodable, "more than 9 hydrogens on one atom");
    if (a.charge < -99 || a.charge > 99)
      throw Error(ErrorKind::kNotEncodable, "charge out of range");
    auto allowed = allowed_valences(a.atomic_number, a.charge);
    const int cap = allowed ? (allowed->empty() ? -1 : allowed->back())
                            : kUnconstrainedCapacity;
    if (g_.bond_valence_sum(i) + g_.total_h(i) > cap)
      throw Error(ErrorKind::kNotEncodable, "atom exceeds token capacity");
  }

  void layout() {
    struct Frame {
      int atom;
      int parent_bond;
      std::size_t next;
    };
    std::vector<bool> seen(static_cast<std::size_t>(g_.bond_count()), false);
    std::vector<Frame> stack { { 0, -1, 0 } };
    preorder_[0] = counter_++;
    while (!stack.empty()) {
      Frame &f = stack.back();
      const auto nbrs = g_.neighbors(f.atom);
      if (f.next >= nbrs.size()) {
        stack.pop_back();
        continue;
      }
      const Neighbor nb = nbrs[f.next++];
      if (nb.bond == f.parent_bond || seen[static_cast<std::size_t>(nb.bond)])
        continue;
      seen[static_cast<std::size_t>(nb.bond)] = true;
      if (preorder_[static_cast<std::size_t>(nb.atom)] < 0) {
        preorder_[static_cast<std::size_t>(nb.atom)] = counter_++;
        children_[static_cast<std::size_t>(f.atom)].push_back(nb);
        stack.push_back({ nb.atom, nb.bond, 0 });
      } else {
        // nb.atom is an ancestor; the ring token goes after f.atom.
        closings_[static_cast<std::size_t>(f.atom)].push_back(nb);
      }
    }
  }

  std::string atom_token(int i, int order) const {
    const Atom &a = g_.atom(i);
    const int h = g_.total_h(i);
    std::string out = "[" + bond_prefix(order);
    if (is_organic_subset(a.atomic_number) && a.charge == 0 && !a.isotope &&
        h == g_.default_implicit_h(i)) {
      out += a.symbol();
      return out + "]";
    }
    if (a.isotope)
      out += std::to_string(*a.isotope);
    out += a.symbol();
    if (h > 0)
      out += "H" + std::to_string(h);
    if (a.charge != 0)
      out += (a.charge > 0 ? "+" : "-") + std::to_string(std::abs(a.charge));
    return out + "]";
  }

  std::vector<std::string> emit(int v, int order) {
    std::vector<std::string> out { atom_token(v, order) };
    for (const Neighbor &nb: closings_[static_cast<std::size_t>(v)]) {
      const std::size_t q = static_cast<std::size_t>(
          preorder_[static_cast<std::size_t>(v)] -
          preorder_[static_cast<std::size_t>(nb.atom)] - 1);
      const int len = index_length(q);
      const int ring_order = bond_valence(g_.bond(nb.bond).order);
      out.push_back("[" + bond_prefix(ring_order) + "Ring" +
                    std::to_string(len) + "]");
      for (std::string &t: index_tokens(q, len))
        out.push_back(std::move(t));
    }
    const auto &kids = children_[static_cast<std::size_t>(v)];
    for (std::size_t k = 0; k < kids.size(); ++k) {
      const int child_order = bond_valence(g_.bond(kids[k].bond).order);
      std::vector<std::string> sub = emit(kids[k].atom, child_order);
      if (k + 1 == kids.size()) {
        for (std::string &t: sub)
          out.push_back(std::move(t));
        break;
      }
      const std::size_t q = sub.size() - 1;
      const int len = index_length(q);
      out.push_back("[" + bond_prefix(child_order) + "Branch" +
                    std::to_string(len) + "]");
      for (std::string &t: index_tokens(q, len))
        out.push_back(std::move(t));
      for (std::string &t: sub)
        out.push_back(std::move(t));
    }
    return out;
  }

  const MolGraph &g_;
  std::vector<int> preorder_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<Neighbor>> closings_;
  int counter_ = 0;
};

}  // namespace

SelfiesToken make_selfies_token(std::string text) {
  SelfiesToken tok;
  const std::string_view body =
      text.size() >= 2 ? std::string_view(text).substr(1, text.size() - 2)
                       : std::string_view();
  if (parse_structural(body, "Branch")) {
    tok.kind = SelfiesTokenKind::kBranch;
  } else if (parse_structural(body, "Ring")) {
    tok.kind = SelfiesTokenKind::kRing;
  } else if (parse_atom(text) && !body.empty() &&
             std::string_view("=#/\\").find(body[0]) != std::string_view::npos) {
    tok.kind = SelfiesTokenKind::kBondedAtom;
  } else {
    tok.kind = SelfiesTokenKind::kAtom;
  }
  tok.text = std::move(text);
  return tok;
}

int selfies_index_code(std::string_view token) {
  for (std::size_t i = 0; i < kIndexAlphabet.size(); ++i) {
    if (kIndexAlphabet[i] == token)
      return static_cast<int>(i);
  }
  return 0;
}

std::string SelfiesStream::str() const {
  std::string out;
  for (const SelfiesToken &t: tokens)
    out += t.text;
  return out;
}

SelfiesStream tokenize_selfies(std::string_view text) {
  SelfiesStream out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != '[')
      throw Error(ErrorKind::kStrayCharacter,
                  "character outside brackets at offset " + std::to_string(pos),
                  pos);
    const std::size_t close = text.find(']', pos);
    if (close == std::string_view::npos)
      throw Error(ErrorKind::kStrayCharacter,
                  "unterminated token at offset " + std::to_string(pos), pos);
    const std::size_t nested = text.find('[', pos + 1);
    if (nested < close)
      throw Error(ErrorKind::kStrayCharacter,
                  "nested '[' at offset " + std::to_string(nested), nested);
    out.tokens.push_back(
        make_selfies_token(std::string(text.substr(pos, close - pos + 1))));
    pos = close + 1;
  }
  return out;
}

MolGraph decode_selfies(const SelfiesStream &stream) {
  if (stream.empty())
    throw Error(ErrorKind::kEmptyStream, "empty SELFIES stream");
  return Decoder(stream).run();
}

SelfiesStream encode_selfies(const MolGraph &g) {
  if (g.empty())
    throw Error(ErrorKind::kNotEncodable, "empty graph");
  if (g.component_count() > 1)
    throw Error(ErrorKind::kNotEncodable,
                "multi-component graph; encode components separately");
  if (!is_valid(g))
    throw Error(ErrorKind::kNotEncodable, "graph fails valence checks");
  MolGraph kek;
  try {
    kek = kekulize(g);
  } catch (const Error &e) {
    throw Error(ErrorKind::kNotEncodable, e.what());
  }
  return Encoder(kek).run();
}

MolGraph decode_selfies_string(std::string_view text) {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::size_t start = 0;
  bool any = false;
  for (;;) {
    const std::size_t dot = text.find('.', start);
    const std::string_view part = text.substr(
        start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    SelfiesStream stream;
    try {
      stream = tokenize_selfies(part);
    } catch (const Error &e) {
      throw Error(e.kind(),
                  "character outside brackets at offset " +
                      std::to_string(start + e.position().value_or(0)),
                  start + e.position().value_or(0));
    }
    if (!stream.empty()) {
      any = true;
      MolGraph piece = decode_selfies(stream);
      const int offset = static_cast<int>(atoms.size());
      atoms.insert(atoms.end(), piece.atoms().begin(), piece.atoms().end());
      for (Bond b: piece.bonds()) {
        b.begin += offset;
        b.end += offset;
        bonds.push_back(b);
      }
    }
    if (dot == std::string_view::npos)
      break;
    start = dot + 1;
  }
  if (!any)
    throw Error(ErrorKind::kEmptyStream, "empty SELFIES string");
  return MolGraph(std::move(atoms), std::move(bonds));
}

std::string encode_selfies_string(const MolGraph &g) {
  if (g.empty())
    throw Error(ErrorKind::kNotEncodable, "empty graph");
  std::string out;
  for (int c = 0; c < g.component_count(); ++c) {
    std::vector<bool> keep(static_cast<std::size_t>(g.atom_count()));
    for (int i = 0; i < g.atom_count(); ++i)
      keep[static_cast<std::size_t>(i)] = g.components()[static_cast<std::size_t>(i)] == c;
    if (c > 0)
      out += '.';
    out += encode_selfies(g.induced_subgraph(keep)).str();
  }
  return out;
}

}  // namespace molbench
