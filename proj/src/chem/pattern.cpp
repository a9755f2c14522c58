#include "prexsyn/chem/pattern.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <functional>
#include <optional>

#include "prexsyn/chem/canonical.hpp"

namespace prexsyn::chem {

namespace {

class PatternParser {
 public:
  explicit PatternParser(std::string_view text) : text_(text) {}

  PatternGraph run() {
    if (text_.empty()) fail("empty pattern");
    int head = parse_atom_required();
    attachments(head);
    continue_chain(head);
    if (pos_ != text_.size()) fail("unexpected character");
    for (int d = 0; d < 10; ++d)
      if (ring_open_[d] >= 0)
        throw ParseError("unclosed ring bond " + std::to_string(d), pos_);
    finalize();
    return std::move(pat_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, pos_);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool done() const { return pos_ >= text_.size(); }

  std::optional<BondConstraint> try_bond() {
    switch (peek()) {
      case '-': ++pos_; return BondConstraint::Single;
      case '=': ++pos_; return BondConstraint::Double;
      case '#': ++pos_; return BondConstraint::Triple;
      case '~': ++pos_; return BondConstraint::Any;
      default: return std::nullopt;
    }
  }

  int try_atom() {
    if (done()) return -1;
    char c = peek();
    if (c == '[') return bracket_atom();
    PatternAtom pa;
    if (c == 'C' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'l') {
      pos_ += 2;
      pa.elements = {Element::Cl};
      pa.arom = AromConstraint::No;
    } else if (c == 'B' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'r') {
      pos_ += 2;
      pa.elements = {Element::Br};
      pa.arom = AromConstraint::No;
    } else if (std::string_view("BCNOPSFI").find(c) != std::string_view::npos) {
      ++pos_;
      pa.elements = {*element_from_symbol(std::string_view(&c, 1))};
      pa.arom = AromConstraint::No;
    } else if (std::string_view("cnos").find(c) != std::string_view::npos) {
      ++pos_;
      char upper = static_cast<char>(std::toupper(c));
      pa.elements = {*element_from_symbol(std::string_view(&upper, 1))};
      pa.arom = AromConstraint::Yes;
    } else {
      return -1;
    }
    pat_.atoms.push_back(pa);
    return static_cast<int>(pat_.atoms.size()) - 1;
  }

  int parse_atom_required() {
    int idx = try_atom();
    if (idx < 0) fail("expected pattern atom");
    return idx;
  }

  int bracket_atom() {
    ++pos_;  // '['
    PatternAtom pa;
    bool any_elem = false, saw_upper = false, saw_lower = false;
    // element list
    while (true) {
      if (done()) fail("unterminated bracket atom");
      char c = peek();
      if (c == '*') {
        ++pos_;
        any_elem = true;
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        bool lower = std::islower(static_cast<unsigned char>(c));
        std::string sym(1, static_cast<char>(std::toupper(c)));
        ++pos_;
        if (!done() && std::islower(static_cast<unsigned char>(peek())) &&
            element_from_symbol(sym + peek()) && !lower)
          sym += text_[pos_++];
        auto e = element_from_symbol(sym);
        if (!e) fail("unsupported element '" + sym + "'");
        if (lower && !aromatic_allowed(*e)) fail("element cannot be aromatic");
        (lower ? saw_lower : saw_upper) = true;
        pa.elements.push_back(*e);
      } else {
        fail("expected element symbol");
      }
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      break;
    }
    if (any_elem) {
      pa.elements.clear();
      pa.arom = AromConstraint::Any;
    } else {
      if (saw_upper && saw_lower) fail("mixed-case element list");
      pa.arom = saw_lower ? AromConstraint::Yes : AromConstraint::No;
      std::sort(pa.elements.begin(), pa.elements.end());
      pa.elements.erase(std::unique(pa.elements.begin(), pa.elements.end()),
                        pa.elements.end());
    }
    if (peek() == ';') {
      ++pos_;
      if (peek() != 'D') fail("expected degree constraint after ';'");
      ++pos_;
      auto digit = [&]() -> int {
        if (!std::isdigit(static_cast<unsigned char>(peek())))
          fail("expected digit in degree constraint");
        return text_[pos_++] - '0';
      };
      if (peek() == '-') {
        ++pos_;
        pa.max_degree = digit();
      } else {
        int lo = digit();
        if (peek() == '-') {
          ++pos_;
          if (std::isdigit(static_cast<unsigned char>(peek())))
            pa.max_degree = digit();
          pa.min_degree = lo;
        } else {
          pa.min_degree = pa.max_degree = lo;
        }
      }
    }
    if (peek() == ':') {
      ++pos_;
      int map = 0;
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        fail("expected map number");
      while (std::isdigit(static_cast<unsigned char>(peek())))
        map = map * 10 + (text_[pos_++] - '0');
      pa.map = map;
    }
    if (peek() != ']') fail("expected ']'");
    ++pos_;
    pat_.atoms.push_back(pa);
    return static_cast<int>(pat_.atoms.size()) - 1;
  }

  void add_bond(int a, int b, std::optional<BondConstraint> order) {
    BondConstraint o;
    if (order) {
      o = *order;
    } else {
      bool both_arom = pat_.atoms[a].arom == AromConstraint::Yes &&
                       pat_.atoms[b].arom == AromConstraint::Yes;
      o = both_arom ? BondConstraint::Aromatic : BondConstraint::Single;
    }
    pat_.bonds.push_back(
        {static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b), o});
  }

  void ring_closure(int digit, int atom, std::optional<BondConstraint> order) {
    int& slot = ring_open_[digit];
    if (slot < 0) {
      slot = atom;
      ring_order_[digit] = order;
      return;
    }
    add_bond(slot, atom, order ? order : ring_order_[digit]);
    slot = -1;
    ring_order_[digit].reset();
  }

  void attachments(int atom) {
    while (!done()) {
      std::size_t save = pos_;
      std::optional<BondConstraint> order = try_bond();
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

  void continue_chain(int prev) {
    while (!done()) {
      char c = peek();
      if (c == ')') return;
      if (c == '(') {
        ++pos_;
        std::optional<BondConstraint> order = try_bond();
        int idx = try_atom();
        if (idx < 0) fail("expected atom after '('");
        add_bond(prev, idx, order);
        attachments(idx);
        continue_chain(idx);
        if (peek() != ')') fail("expected ')'");
        ++pos_;
        continue;
      }
      std::optional<BondConstraint> order = try_bond();
      int idx = try_atom();
      if (idx < 0) {
        if (order) fail("dangling bond");
        return;
      }
      add_bond(prev, idx, order);
      attachments(idx);
      prev = idx;
    }
  }

  void finalize() {
    for (std::size_t i = 0; i < pat_.atoms.size(); ++i) {
      int map = pat_.atoms[i].map;
      if (map == 1) {
        if (pat_.anchor >= 0) throw InvariantError("multiple anchor atoms");
        pat_.anchor = static_cast<int>(i);
      } else if (map == 2) {
        if (pat_.anchor2 >= 0)
          throw InvariantError("multiple secondary anchors");
        pat_.anchor2 = static_cast<int>(i);
      } else if (map >= 90) {
        pat_.leaving.push_back(static_cast<int>(i));
      } else if (map != 0) {
        throw InvariantError("map numbers must be 1, 2 or >= 90");
      }
    }
    if (pat_.anchor < 0) throw InvariantError("pattern has no anchor (map 1)");
    // connected
    std::vector<std::vector<int>> adj(pat_.atoms.size());
    for (const auto& b : pat_.bonds) {
      adj[b.a].push_back(b.b);
      adj[b.b].push_back(b.a);
    }
    auto reachable = [&](const std::vector<bool>& blocked) {
      std::vector<bool> seen(pat_.atoms.size(), false);
      std::deque<int> q{pat_.anchor};
      seen[pat_.anchor] = true;
      while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int v : adj[u])
          if (!seen[v] && !blocked[v]) {
            seen[v] = true;
            q.push_back(v);
          }
      }
      return seen;
    };
    std::vector<bool> none(pat_.atoms.size(), false);
    auto all = reachable(none);
    for (std::size_t i = 0; i < pat_.atoms.size(); ++i)
      if (!all[i]) throw InvariantError("pattern not connected");
    std::vector<bool> blocked(pat_.atoms.size(), false);
    for (int l : pat_.leaving) blocked[l] = true;
    if (blocked[pat_.anchor])
      throw InvariantError("anchor cannot be a leaving atom");
    auto kept = reachable(blocked);
    for (std::size_t i = 0; i < pat_.atoms.size(); ++i)
      if (!kept[i] && !blocked[i] && static_cast<int>(i) != pat_.anchor &&
          static_cast<int>(i) != pat_.anchor2)
        throw InvariantError(
            "leaving-atom removal disconnects a retained atom from the anchor");
    if (pat_.anchor2 >= 0 && !kept[pat_.anchor2])
      throw InvariantError("second anchor separated from anchor");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  PatternGraph pat_;
  std::array<int, 10> ring_open_{-1, -1, -1, -1, -1, -1, -1, -1, -1, -1};
  std::array<std::optional<BondConstraint>, 10> ring_order_;
};

}  // namespace

PatternGraph parse_pattern(std::string_view text) {
  return PatternParser(text).run();
}

std::string pattern_to_string(const PatternGraph& p) {
  // Debug form, not round-trippable: atom constraints joined linearly.
  std::string out;
  for (std::size_t i = 0; i < p.atoms.size(); ++i) {
    const auto& a = p.atoms[i];
    out += '[';
    if (a.elements.empty()) {
      out += '*';
    } else {
      for (std::size_t k = 0; k < a.elements.size(); ++k) {
        if (k) out += ',';
        out += element_symbol(a.elements[k]);
      }
    }
    if (a.map) out += ":" + std::to_string(a.map);
    out += ']';
  }
  return out;
}

bool atom_matches(const PatternAtom& pa, const MolGraph& m,
                  const Adjacency& adj, std::size_t atom) {
  const Atom& a = m.atoms[atom];
  if (!pa.elements.empty() &&
      !std::binary_search(pa.elements.begin(), pa.elements.end(), a.element))
    return false;
  if (pa.arom == AromConstraint::Yes && !a.aromatic) return false;
  if (pa.arom == AromConstraint::No && a.aromatic) return false;
  int deg = adj.degree(atom);
  return deg >= pa.min_degree && deg <= pa.max_degree;
}

bool bond_matches(BondConstraint c, BondOrder order) {
  switch (c) {
    case BondConstraint::Any: return true;
    case BondConstraint::Single: return order == BondOrder::Single;
    case BondConstraint::Double: return order == BondOrder::Double;
    case BondConstraint::Triple: return order == BondOrder::Triple;
    case BondConstraint::Aromatic: return order == BondOrder::Aromatic;
  }
  return false;
}

namespace {

struct Matcher {
  const PatternGraph& pat;
  const MolGraph& mol;
  const Adjacency& adj;
  bool first_only = false;

  std::vector<int> visit_order{};            // pattern atoms, DFS from anchor
  std::vector<std::vector<int>> back_edges{};  // bond idx per visit position
  std::vector<int> assignment{};
  std::vector<bool> used{};
  std::vector<std::vector<int>> results{};

  void prepare() {
    const std::size_t n = pat.atoms.size();
    std::vector<std::vector<std::pair<int, int>>> padj(n);  // (nbr, bond idx)
    for (std::size_t bi = 0; bi < pat.bonds.size(); ++bi) {
      padj[pat.bonds[bi].a].push_back({pat.bonds[bi].b, static_cast<int>(bi)});
      padj[pat.bonds[bi].b].push_back({pat.bonds[bi].a, static_cast<int>(bi)});
    }
    std::vector<bool> seen(n, false);
    visit_order.reserve(n);
    std::function<void(int)> dfs = [&](int u) {
      seen[u] = true;
      visit_order.push_back(u);
      for (auto [v, bi] : padj[u])
        if (!seen[v]) dfs(v);
    };
    int root = pat.anchor >= 0 ? pat.anchor : 0;
    dfs(root);
    // bonds from each visited atom into the already-visited prefix
    std::vector<int> pos(n, -1);
    for (std::size_t i = 0; i < visit_order.size(); ++i) pos[visit_order[i]] = i;
    back_edges.assign(n, {});
    for (std::size_t bi = 0; bi < pat.bonds.size(); ++bi) {
      int pa = pos[pat.bonds[bi].a], pb = pos[pat.bonds[bi].b];
      int later = pa > pb ? pat.bonds[bi].a : pat.bonds[bi].b;
      back_edges[pos[later]].push_back(static_cast<int>(bi));
    }
    assignment.assign(n, -1);
    used.assign(mol.atoms.size(), false);
  }

  bool feasible(int pattern_atom, int mol_atom) {
    if (used[mol_atom]) return false;
    if (!atom_matches(pat.atoms[pattern_atom], mol, adj, mol_atom))
      return false;
    return true;
  }

  bool edges_ok(std::size_t position, int mol_atom) {
    for (int bi : back_edges[position]) {
      const auto& pb = pat.bonds[bi];
      int other_pattern = (visit_order[position] == pb.a) ? pb.b : pb.a;
      int other_mol = assignment[other_pattern];
      if (other_mol == mol_atom) return false;
      // find molecule bond between mol_atom and other_mol
      bool found = false;
      for (const auto* e = adj.begin(mol_atom); e != adj.end(mol_atom); ++e) {
        if (static_cast<int>(e->neighbor) == other_mol) {
          if (bond_matches(pb.order, mol.bonds[e->bond].order)) found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  }

  bool extend(std::size_t position) {
    if (position == visit_order.size()) {
      results.push_back(assignment);
      return first_only;
    }
    int pattern_atom = visit_order[position];
    if (position == 0) {
      for (std::size_t a = 0; a < mol.atoms.size(); ++a) {
        if (!feasible(pattern_atom, static_cast<int>(a))) continue;
        assignment[pattern_atom] = static_cast<int>(a);
        used[a] = true;
        if (extend(position + 1)) return true;
        used[a] = false;
        assignment[pattern_atom] = -1;
      }
      return false;
    }
    // candidates: molecule neighbors of the first mapped pattern neighbor
    int anchor_bond = back_edges[position].front();
    const auto& pb = pat.bonds[anchor_bond];
    int other_pattern = (pattern_atom == pb.a) ? pb.b : pb.a;
    int other_mol = assignment[other_pattern];
    for (const auto* e = adj.begin(other_mol); e != adj.end(other_mol); ++e) {
      int cand = e->neighbor;
      if (!feasible(pattern_atom, cand)) continue;
      if (!edges_ok(position, cand)) continue;
      assignment[pattern_atom] = cand;
      used[cand] = true;
      if (extend(position + 1)) return true;
      used[cand] = false;
      assignment[pattern_atom] = -1;
    }
    return false;
  }
};

}  // namespace

std::vector<std::vector<int>> match_pattern_unsorted(const PatternGraph& p,
                                                     const MolGraph& m) {
  if (p.atoms.empty() || m.atoms.empty()) return {};
  Adjacency adj(m);
  Matcher matcher{p, m, adj};
  matcher.prepare();
  matcher.extend(0);
  return std::move(matcher.results);
}

std::vector<std::vector<int>> match_pattern(const PatternGraph& p,
                                            const MolGraph& m) {
  auto results = match_pattern_unsorted(p, m);
  if (results.size() > 1) {
    auto ranks = canonical_ranks(m);
    std::sort(results.begin(), results.end(),
              [&](const std::vector<int>& x, const std::vector<int>& y) {
                for (std::size_t i = 0; i < x.size(); ++i) {
                  if (ranks[x[i]] != ranks[y[i]])
                    return ranks[x[i]] < ranks[y[i]];
                }
                return false;
              });
  }
  return results;
}

bool has_match(const PatternGraph& p, const MolGraph& m) {
  if (p.atoms.empty() || m.atoms.empty()) return false;
  Adjacency adj(m);
  Matcher matcher{p, m, adj};
  matcher.first_only = true;
  matcher.prepare();
  matcher.extend(0);
  return !matcher.results.empty();
}

}  // namespace prexsyn::chem
