//
// molbench - Copyright 2026 The molbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "molbench/elements.hpp"
#include "molbench/error.hpp"
#include "molbench/smiles.hpp"

namespace molbench {
namespace {

struct PendingBond {
  std::optional<BondOrder> order;
  char direction = 0;
  std::size_t offset = 0;
};

struct OpenRing {
  int atom;
  PendingBond bond;
  std::size_t offset;
};

struct ParsedBond {
  Bond bond;
  bool implicit_aromatic = false;
};

[[noreturn]] void fail(ErrorKind kind, const std::string &what,
                       std::size_t offset) {
  throw Error(kind, what + " at offset " + std::to_string(offset), offset);
}

class Parser {
public:
  Parser(std::string_view text, std::size_t base) : text_(text), base_(base) { }

  MolGraph run() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      const auto uc = static_cast<unsigned char>(c);
      if (uc >= 0x80 || std::isspace(uc) || std::iscntrl(uc))
        fail(ErrorKind::kSyntax, "unexpected byte", offset());
      switch (c) {
      case '(':
        open_branch();
        break;
      case ')':
        close_branch();
        break;
      case '-':
      case '=':
      case '#':
      case ':':
      case '/':
      case '\\':
        read_bond();
        break;
      case '$':
        fail(ErrorKind::kUnsupportedFeature, "quadruple bond", offset());
      case '.':
        if (prev_ < 0 || pending_)
          fail(ErrorKind::kSyntax, "misplaced '.'", offset());
        prev_ = -1;
        dot_offset_ = offset();
        ++pos_;
        break;
      case '%':
        read_ring(true);
        break;
      case '[':
        read_bracket_atom();
        break;
      default:
        if (std::isdigit(uc))
          read_ring(false);
        else
          read_organic_atom();
      }
    }
    finish();

    std::vector<Bond> bonds;
    bonds.reserve(bonds_.size());
    for (const ParsedBond &pb: bonds_)
      bonds.push_back(pb.bond);
    MolGraph g(atoms_, bonds);

    // Implicit bonds between aromatic atoms only stay aromatic inside rings.
    bool demoted = false;
    for (std::size_t b = 0; b < bonds_.size(); ++b) {
      if (bonds_[b].implicit_aromatic && !g.ring_bond(static_cast<int>(b))) {
        bonds[b].order = BondOrder::kSingle;
        demoted = true;
      }
    }
    return demoted ? MolGraph(std::move(atoms_), std::move(bonds)) : g;
  }

private:
  std::size_t offset() const { return base_ + pos_; }

  void add_atom(Atom atom, std::size_t at) {
    const int idx = static_cast<int>(atoms_.size());
    atoms_.push_back(std::move(atom));
    if (prev_ >= 0) {
      add_bond(prev_, idx, pending_.value_or(PendingBond {}), at);
    } else if (pending_) {
      fail(ErrorKind::kSyntax, "bond without a preceding atom",
           pending_->offset);
    }
    pending_.reset();
    prev_ = idx;
  }

  void add_bond(int a, int b, const PendingBond &pb, std::size_t at) {
    if (a == b)
      fail(ErrorKind::kSyntax, "ring bond closes on its own atom", at);
    for (const ParsedBond &existing: bonds_) {
      if ((existing.bond.begin == a && existing.bond.end == b) ||
          (existing.bond.begin == b && existing.bond.end == a))
        fail(ErrorKind::kSyntax, "atoms bonded twice", at);
    }
    ParsedBond out;
    out.bond.begin = a;
    out.bond.end = b;
    out.bond.direction = pb.direction;
    if (pb.order) {
      out.bond.order = *pb.order;
    } else if (atoms_[static_cast<std::size_t>(a)].aromatic &&
               atoms_[static_cast<std::size_t>(b)].aromatic) {
      out.bond.order = BondOrder::kAromatic;
      out.implicit_aromatic = true;
    }
    bonds_.push_back(out);
  }

  void open_branch() {
    if (prev_ < 0 || pending_)
      fail(ErrorKind::kSyntax, "branch without a preceding atom", offset());
    branches_.push_back({ prev_, offset() });
    ++pos_;
  }

  void close_branch() {
    if (branches_.empty())
      fail(ErrorKind::kUnbalancedParenthesis, "unmatched ')'", offset());
    if (pending_)
      fail(ErrorKind::kSyntax, "dangling bond", pending_->offset);
    if (prev_ < 0 || prev_ == branches_.back().first)
      fail(ErrorKind::kSyntax, "empty branch", offset());
    prev_ = branches_.back().first;
    branches_.pop_back();
    ++pos_;
  }

  void read_bond() {
    if (pending_)
      fail(ErrorKind::kSyntax, "consecutive bond symbols", offset());
    PendingBond pb;
    pb.offset = offset();
    switch (text_[pos_]) {
    case '-':
      pb.order = BondOrder::kSingle;
      break;
    case '=':
      pb.order = BondOrder::kDouble;
      break;
    case '#':
      pb.order = BondOrder::kTriple;
      break;
    case ':':
      pb.order = BondOrder::kAromatic;
      break;
    default:
      pb.order = BondOrder::kSingle;
      pb.direction = text_[pos_];
    }
    pending_ = pb;
    ++pos_;
  }

  void read_ring(bool percent) {
    const std::size_t at = offset();
    int number = 0;
    if (percent) {
      if (pos_ + 2 >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2])))
        fail(ErrorKind::kSyntax, "'%' needs two digits", at);
      number = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      number = text_[pos_] - '0';
      ++pos_;
    }
    if (prev_ < 0)
      fail(ErrorKind::kSyntax, "ring bond without a preceding atom", at);

    auto it = rings_.find(number);
    if (it == rings_.end()) {
      rings_[number] = { prev_, pending_.value_or(PendingBond {}), at };
      pending_.reset();
      return;
    }
    PendingBond pb = it->second.bond;
    if (pending_) {
      if (pb.order && *pb.order != *pending_->order)
        fail(ErrorKind::kSyntax, "conflicting ring bond symbols", at);
      if (!pb.order)
        pb = *pending_;
    }
    const int partner = it->second.atom;
    rings_.erase(it);
    pending_.reset();
    add_bond(partner, prev_, pb, at);
  }

  void read_organic_atom() {
    const std::size_t at = offset();
    const char c = text_[pos_];
    Atom atom;
    auto two = [&](char next) {
      return pos_ + 1 < text_.size() && text_[pos_ + 1] == next;
    };
    int len = 1;
    switch (c) {
    case 'C':
      if (two('l')) {
        atom.atomic_number = 17;
        len = 2;
      } else {
        atom.atomic_number = 6;
      }
      break;
    case 'B':
      if (two('r')) {
        atom.atomic_number = 35;
        len = 2;
      } else {
        atom.atomic_number = 5;
      }
      break;
    case 'N':
      atom.atomic_number = 7;
      break;
    case 'O':
      atom.atomic_number = 8;
      break;
    case 'P':
      atom.atomic_number = 15;
      break;
    case 'S':
      atom.atomic_number = 16;
      break;
    case 'F':
      atom.atomic_number = 9;
      break;
    case 'I':
      atom.atomic_number = 53;
      break;
    case '*':
      atom.atomic_number = 0;
      break;
    case 'b':
    case 'c':
    case 'n':
    case 'o':
    case 'p':
    case 's':
      atom.atomic_number = find_element(std::string(1, static_cast<char>(
                                            std::toupper(c))))
                               ->atomic_number;
      atom.aromatic = true;
      break;
    default:
      if (std::isalpha(static_cast<unsigned char>(c)))
        fail(ErrorKind::kUnknownElement,
             std::string("element '") + c + "' needs brackets or is unknown",
             at);
      fail(ErrorKind::kSyntax, std::string("unexpected character '") + c + "'",
           at);
    }
    pos_ += static_cast<std::size_t>(len);
    add_atom(std::move(atom), at);
  }

  int read_number(std::size_t max_digits) {
    int value = 0;
    std::size_t n = 0;
    while (pos_ < text_.size() && n < max_digits &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      ++pos_;
      ++n;
    }
    return n == 0 ? -1 : value;
  }

  void read_bracket_atom() {
    const std::size_t open = offset();
    const std::size_t close = text_.find(']', pos_);
    if (close == std::string_view::npos)
      fail(ErrorKind::kBadBracketAtom, "unterminated bracket atom", open);
    ++pos_;
    Atom atom;

    const int isotope = read_number(4);
    if (isotope >= 0)
      atom.isotope = isotope;

    const std::size_t sym_at = offset();
    if (pos_ >= close)
      fail(ErrorKind::kBadBracketAtom, "bracket atom without element", open);
    const char c = text_[pos_];
    if (c == '*') {
      atom.atomic_number = 0;
      ++pos_;
    } else if (std::islower(static_cast<unsigned char>(c))) {
      // Aromatic spellings: se, as, then single letters.
      std::string sym;
      if (pos_ + 1 < close &&
          ((c == 's' && text_[pos_ + 1] == 'e') ||
           (c == 'a' && text_[pos_ + 1] == 's'))) {
        sym = { static_cast<char>(std::toupper(c)), text_[pos_ + 1] };
      } else {
        sym = std::string(1, static_cast<char>(std::toupper(c)));
      }
      const ElementInfo *e = find_element(sym);
      if (e == nullptr || !has_aromatic_symbol(e->atomic_number))
        fail(ErrorKind::kUnknownElement, "unknown aromatic element", sym_at);
      atom.atomic_number = e->atomic_number;
      atom.aromatic = true;
      pos_ += sym.size();
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      const ElementInfo *e = nullptr;
      if (pos_ + 1 < close &&
          std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) {
        e = find_element(text_.substr(pos_, 2));
        if (e != nullptr)
          pos_ += 2;
      }
      if (e == nullptr) {
        e = find_element(text_.substr(pos_, 1));
        if (e == nullptr)
          fail(ErrorKind::kUnknownElement, "unknown element", sym_at);
        ++pos_;
      }
      atom.atomic_number = e->atomic_number;
    } else {
      fail(ErrorKind::kBadBracketAtom, "bracket atom without element", sym_at);
    }

    if (pos_ < close && text_[pos_] == '@') {
      const std::size_t start = pos_;
      ++pos_;
      if (pos_ < close && text_[pos_] == '@') {
        ++pos_;
      } else if (pos_ + 1 < close &&
                 std::isupper(static_cast<unsigned char>(text_[pos_])) &&
                 std::isupper(static_cast<unsigned char>(text_[pos_ + 1]))) {
        pos_ += 2;
        if (read_number(2) < 0)
          fail(ErrorKind::kBadBracketAtom, "chirality class needs a number",
               offset());
      }
      atom.chirality = std::string(text_.substr(start, pos_ - start));
    }

    int h = 0;
    if (pos_ < close && text_[pos_] == 'H') {
      ++pos_;
      const int n = read_number(1);
      h = n < 0 ? 1 : n;
    }
    atom.explicit_h = h;

    if (pos_ < close && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const char sign = text_[pos_];
      ++pos_;
      int magnitude = 1;
      const int n = read_number(2);
      if (n >= 0) {
        magnitude = n;
      } else {
        while (pos_ < close && text_[pos_] == sign) {
          ++magnitude;
          ++pos_;
        }
      }
      if (magnitude > 15)
        fail(ErrorKind::kBadBracketAtom, "charge out of range", offset());
      atom.charge = sign == '+' ? magnitude : -magnitude;
    }

    if (pos_ < close && text_[pos_] == ':') {
      ++pos_;
      if (read_number(6) < 0)
        fail(ErrorKind::kBadBracketAtom, "atom class needs a number", offset());
    }
    if (pos_ != close)
      fail(ErrorKind::kBadBracketAtom, "unexpected character in bracket atom",
           offset());
    pos_ = close + 1;
    add_atom(std::move(atom), open);
  }

  void finish() {
    if (pending_)
      fail(ErrorKind::kSyntax, "dangling bond", pending_->offset);
    if (!branches_.empty())
      fail(ErrorKind::kUnbalancedParenthesis, "unclosed '('",
           branches_.front().second);
    if (!rings_.empty()) {
      std::size_t first = rings_.begin()->second.offset;
      for (const auto &[num, ring]: rings_)
        first = std::min(first, ring.offset);
      fail(ErrorKind::kUnclosedRingBond, "unclosed ring bond", first);
    }
    if (prev_ < 0)
      fail(ErrorKind::kSyntax, "trailing '.'", dot_offset_);
  }

  std::string_view text_;
  std::size_t base_;
  std::size_t pos_ = 0;
  std::vector<Atom> atoms_;
  std::vector<ParsedBond> bonds_;
  int prev_ = -1;
  std::optional<PendingBond> pending_;
  std::vector<std::pair<int, std::size_t>> branches_;
  std::map<int, OpenRing> rings_;
  std::size_t dot_offset_ = 0;
};

}  // namespace

MolGraph parse_smiles(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  auto space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  };
  while (begin < end && space(text[begin]))
    ++begin;
  while (end > begin && space(text[end - 1]))
    --end;
  if (begin == end)
    throw Error(ErrorKind::kEmptyInput, "empty SMILES at offset 0", 0);
  return Parser(text.substr(begin, end - begin), begin).run();
}

bool is_valid_smiles(std::string_view text) {
  try {
    return is_valid(parse_smiles(text));
  } catch (const Error &) {
    return false;
  }
}

}  // namespace molbench
