#include "prexsyn/chem/smiles.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <optional>

namespace prexsyn::chem {

namespace {

struct ParsedAtom {
  Atom atom;
  bool ok = false;
};

class SmilesParser {
 public:
  SmilesParser(std::string_view text, bool allow_wildcards)
      : text_(text), allow_wildcards_(allow_wildcards) {}

  MolGraph run() {
    if (text_.empty()) fail("empty input");
    parse_chain();
    if (pos_ != text_.size()) fail("unexpected character");
    for (int d = 0; d < 10; ++d)
      if (ring_open_[d].atom >= 0)
        throw ParseError("unclosed ring bond " + std::to_string(d),
                         ring_open_[d].position);
    return std::move(mol_);
  }

 private:
  struct RingSlot {
    int atom = -1;
    std::optional<BondOrder> order;
    std::size_t position = 0;
  };

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, pos_);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char take() { return text_[pos_++]; }
  bool done() const { return pos_ >= text_.size(); }

  std::optional<BondOrder> try_bond() {
    switch (peek()) {
      case '-': ++pos_; return BondOrder::Single;
      case '=': ++pos_; return BondOrder::Double;
      case '#': ++pos_; return BondOrder::Triple;
      default: return std::nullopt;
    }
  }

  ParsedAtom try_atom() {
    ParsedAtom out;
    if (done()) return out;
    char c = peek();
    if (c == '[') return bracket_atom();
    // two-letter organic symbols first
    if (c == 'C' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'l') {
      pos_ += 2;
      out.atom = {Element::Cl, false, 0};
      out.ok = true;
      return out;
    }
    if (c == 'B' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'r') {
      pos_ += 2;
      out.atom = {Element::Br, false, 0};
      out.ok = true;
      return out;
    }
    static constexpr std::string_view organic = "BCNOPSFI";
    static constexpr std::string_view aromatic = "cnos";
    if (organic.find(c) != std::string_view::npos) {
      ++pos_;
      out.atom = {*element_from_symbol(std::string_view(&c, 1)), false, 0};
      out.ok = true;
      return out;
    }
    if (aromatic.find(c) != std::string_view::npos) {
      ++pos_;
      char upper = static_cast<char>(std::toupper(c));
      out.atom = {*element_from_symbol(std::string_view(&upper, 1)), true, 0};
      out.ok = true;
      return out;
    }
    return out;
  }

  ParsedAtom bracket_atom() {
    std::size_t start = pos_;
    ++pos_;  // '['
    ParsedAtom out;
    if (done()) fail("unterminated bracket atom");
    char c = peek();
    if (c == '*') {
      if (!allow_wildcards_)
        throw ParseError("wildcard atom not allowed here", pos_);
      ++pos_;
      out.atom = {Element::Wild, false, 0};
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      std::string sym(1, take());
      if (!done() && std::islower(static_cast<unsigned char>(peek())) &&
          element_from_symbol(sym + peek()))
        sym += take();
      auto e = element_from_symbol(sym);
      if (!e) throw ParseError("unsupported element '" + sym + "'", start + 1);
      out.atom = {*e, false, 0};
    } else if (std::islower(static_cast<unsigned char>(c))) {
      std::string_view arom = "cnos";
      if (arom.find(c) == std::string_view::npos)
        throw ParseError(std::string("unsupported aromatic element '") + c + "'",
                         pos_);
      ++pos_;
      char upper = static_cast<char>(std::toupper(c));
      out.atom = {*element_from_symbol(std::string_view(&upper, 1)), true, 0};
    } else {
      fail("expected element symbol in bracket atom");
    }
    if (peek() == '+') {
      ++pos_;
      out.atom.charge = 1;
    } else if (peek() == '-') {
      ++pos_;
      out.atom.charge = -1;
    }
    if (peek() != ']') fail("expected ']'");
    ++pos_;
    out.ok = true;
    return out;
  }

  void bond_atoms(int a, int b, std::optional<BondOrder> order) {
    BondOrder o = order.value_or(
        (mol_.atoms[a].aromatic && mol_.atoms[b].aromatic) ? BondOrder::Aromatic
                                                           : BondOrder::Single);
    mol_.add_bond(a, b, o);
  }

  void ring_closure(int digit, int atom, std::optional<BondOrder> order) {
    RingSlot& slot = ring_open_[digit];
    if (slot.atom < 0) {
      slot = {atom, order, pos_};
      return;
    }
    if (slot.atom == atom) fail("ring bond to the same atom");
    if (slot.order && order && *slot.order != *order)
      fail("conflicting ring bond orders");
    bond_atoms(slot.atom, atom, slot.order ? slot.order : order);
    slot = RingSlot{};
  }

  void parse_chain() {
    ParsedAtom first = try_atom();
    if (!first.ok) fail("expected atom");
    int head = static_cast<int>(mol_.add_atom(first.atom));
    attachments(head);
    continue_chain(head);
  }

  // Ring-closure digits (with optional preceding bond symbol) after an atom.
  void attachments(int atom) {
    while (!done()) {
      std::size_t save = pos_;
      std::optional<BondOrder> order = try_bond();
      char c = peek();
      if (c >= '1' && c <= '9') {
        ++pos_;
        ring_closure(c - '0', atom, order);
      } else {
        pos_ = save;
        return;
      }
    }
  }

  // Continuation after a branch head: same grammar as parse_chain's loop.
  void continue_chain(int prev) {
    while (!done()) {
      char c = peek();
      if (c == ')') return;
      if (c == '(') {
        ++pos_;
        std::optional<BondOrder> order = try_bond();
        ParsedAtom a = try_atom();
        if (!a.ok) fail("expected atom after '('");
        int idx = static_cast<int>(mol_.add_atom(a.atom));
        bond_atoms(prev, idx, order);
        attachments(idx);
        continue_chain(idx);
        if (peek() != ')') fail("expected ')'");
        ++pos_;
        continue;
      }
      std::optional<BondOrder> order = try_bond();
      ParsedAtom a = try_atom();
      if (!a.ok) {
        if (order) fail("dangling bond");
        return;
      }
      int idx = static_cast<int>(mol_.add_atom(a.atom));
      bond_atoms(prev, idx, order);
      attachments(idx);
      prev = idx;
    }
  }

  std::string_view text_;
  bool allow_wildcards_;
  std::size_t pos_ = 0;
  MolGraph mol_;
  std::array<RingSlot, 10> ring_open_;
};

}  // namespace

MolGraph parse_smiles(std::string_view text, bool require_connected,
                      bool allow_wildcards) {
  SmilesParser parser(text, allow_wildcards);
  MolGraph m = parser.run();
  validate_molecule(m, require_connected, allow_wildcards);
  return m;
}

namespace {

void atom_token(const Atom& a, std::string& out) {
  bool bracket = a.charge != 0 || a.element == Element::Wild;
  std::string sym(element_symbol(a.element));
  if (a.aromatic)
    for (auto& c : sym) c = static_cast<char>(std::tolower(c));
  if (!bracket) {
    out += sym;
    return;
  }
  out += '[';
  out += sym;
  if (a.charge > 0) out += '+';
  if (a.charge < 0) out += '-';
  out += ']';
}

void bond_token(const MolGraph& m, const Bond& b, std::string& out) {
  switch (b.order) {
    case BondOrder::Single:
      if (m.atoms[b.a].aromatic && m.atoms[b.b].aromatic) out += '-';
      break;
    case BondOrder::Aromatic:
      break;
    case BondOrder::Double:
      out += '=';
      break;
    case BondOrder::Triple:
      out += '#';
      break;
  }
}

}  // namespace

std::string write_smiles_ordered(const MolGraph& m,
                                 const std::vector<int>& rank,
                                 std::vector<int>* emission_order) {
  const std::size_t n = m.atoms.size();
  if (n == 0) return {};
  Adjacency adj(m);

  // Pass 1: DFS in rank order; classify tree vs ring-closure bonds and record
  // the pre-order.
  std::vector<int> order;
  order.reserve(n);
  std::vector<int> parent_bond(n, -1);
  std::vector<bool> visited(n, false);
  std::vector<bool> is_ring_bond(m.bonds.size(), false);
  std::vector<std::vector<int>> children(n);  // child atom order
  std::vector<std::vector<int>> ring_at(n);   // ring bonds discovered at atom

  int start = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (rank[i] < rank[start]) start = static_cast<int>(i);

  std::function<void(int)> dfs = [&](int u) {
    visited[u] = true;
    order.push_back(u);
    std::vector<std::pair<int, const Adjacency::Edge*>> nbrs;
    for (const auto* e = adj.begin(u); e != adj.end(u); ++e)
      nbrs.push_back({rank[e->neighbor], e});
    std::sort(nbrs.begin(), nbrs.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [r, e] : nbrs) {
      if (static_cast<int>(e->bond) == parent_bond[u]) continue;
      if (visited[e->neighbor]) {
        if (!is_ring_bond[e->bond]) {
          is_ring_bond[e->bond] = true;
          ring_at[e->neighbor].push_back(e->bond);  // opened at the ancestor
          ring_at[u].push_back(e->bond);
        }
        continue;
      }
      parent_bond[e->neighbor] = e->bond;
      children[u].push_back(e->neighbor);
      dfs(e->neighbor);
    }
  };
  dfs(start);

  // Digit assignment: smallest free digit at the opening atom, released at
  // the closing atom.
  std::vector<int> digit_of_bond(m.bonds.size(), -1);
  std::array<bool, 10> digit_used{};
  std::vector<int> seen_count(m.bonds.size(), 0);
  for (int u : order) {
    for (int b : ring_at[u]) {
      if (++seen_count[b] == 1) {
        int d = 1;
        while (d < 10 && digit_used[d]) ++d;
        if (d == 10)
          throw InvariantError("more than 9 concurrent ring closures");
        digit_used[d] = true;
        digit_of_bond[b] = d;
      } else {
        digit_used[digit_of_bond[b]] = false;
      }
    }
  }

  // Pass 2: emit.
  std::string out;
  std::function<void(int)> emit = [&](int u) {
    if (parent_bond[u] >= 0) bond_token(m, m.bonds[parent_bond[u]], out);
    atom_token(m.atoms[u], out);
    for (int b : ring_at[u]) {
      bond_token(m, m.bonds[b], out);
      out += static_cast<char>('0' + digit_of_bond[b]);
    }
    const auto& kids = children[u];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i + 1 < kids.size()) {
        out += '(';
        emit(kids[i]);
        out += ')';
      } else {
        emit(kids[i]);
      }
    }
  };
  emit(start);

  if (emission_order) {
    emission_order->assign(n, -1);
    for (std::size_t i = 0; i < order.size(); ++i)
      (*emission_order)[order[i]] = static_cast<int>(i);
  }
  return out;
}

}  // namespace prexsyn::chem
