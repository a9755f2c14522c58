#include "prexsyn/chem/mol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <set>

namespace prexsyn::chem {

namespace {

struct ElementInfo {
  Element e;
  std::string_view symbol;
  double weight;
};

constexpr ElementInfo kElements[] = {
    {Element::B, "B", 10.81},   {Element::C, "C", 12.011},
    {Element::N, "N", 14.007},  {Element::O, "O", 15.999},
    {Element::P, "P", 30.974},  {Element::S, "S", 32.06},
    {Element::F, "F", 18.998},  {Element::Cl, "Cl", 35.45},
    {Element::Br, "Br", 79.904},{Element::I, "I", 126.904},
    {Element::Wild, "*", 0.0},
};

}  // namespace

std::string_view element_symbol(Element e) {
  return kElements[static_cast<int>(e)].symbol;
}

std::optional<Element> element_from_symbol(std::string_view s) {
  for (const auto& info : kElements)
    if (info.symbol == s) return info.e;
  return std::nullopt;
}

double atomic_weight(Element e) {
  return kElements[static_cast<int>(e)].weight;
}

Adjacency::Adjacency(const MolGraph& m) {
  offsets_.assign(m.atoms.size() + 1, 0);
  for (const auto& b : m.bonds) {
    ++offsets_[b.a + 1];
    ++offsets_[b.b + 1];
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
  edges_.resize(m.bonds.size() * 2);
  std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t bi = 0; bi < m.bonds.size(); ++bi) {
    const auto& b = m.bonds[bi];
    edges_[cursor[b.a]++] = {b.b, static_cast<std::uint16_t>(bi)};
    edges_[cursor[b.b]++] = {b.a, static_cast<std::uint16_t>(bi)};
  }
}

double bond_valence_contribution(BondOrder order, Element e) {
  switch (order) {
    case BondOrder::Single: return 1.0;
    case BondOrder::Double: return 2.0;
    case BondOrder::Triple: return 3.0;
    case BondOrder::Aromatic:
      return (e == Element::O || e == Element::S) ? 1.0 : 1.5;
  }
  return 1.0;
}

std::vector<int> implicit_hydrogens(const MolGraph& m, const Adjacency& adj) {
  std::vector<int> h(m.atoms.size(), 0);
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    const Atom& a = m.atoms[i];
    if (a.element == Element::Wild) {
      h[i] = 0;
      continue;
    }
    double sum = 0.0;
    for (const auto* e = adj.begin(i); e != adj.end(i); ++e)
      sum += bond_valence_contribution(m.bonds[e->bond].order, a.element);
    const int valence = default_valence(a.element) + a.charge;
    const int free = valence - static_cast<int>(std::floor(sum));
    if (free < 0)
      throw ValenceError("valence exceeded on atom " + std::to_string(i) +
                         " (" + std::string(element_symbol(a.element)) + ")");
    h[i] = free;
  }
  return h;
}

std::vector<int> implicit_hydrogens(const MolGraph& m) {
  return implicit_hydrogens(m, Adjacency(m));
}

std::vector<int> heavy_degrees(const MolGraph& m) {
  std::vector<int> d(m.atoms.size(), 0);
  for (const auto& b : m.bonds) {
    ++d[b.a];
    ++d[b.b];
  }
  return d;
}

namespace {

// Mark edges on cycles by stripping degree-1 atoms iteratively.
std::vector<bool> cycle_edges(const MolGraph& m) {
  std::vector<int> deg = heavy_degrees(m);
  std::vector<bool> removed_atom(m.atoms.size(), false);
  std::vector<bool> removed_bond(m.bonds.size(), false);
  Adjacency adj(m);
  std::deque<std::size_t> leaves;
  for (std::size_t i = 0; i < m.atoms.size(); ++i)
    if (deg[i] <= 1) leaves.push_back(i);
  while (!leaves.empty()) {
    std::size_t u = leaves.front();
    leaves.pop_front();
    if (removed_atom[u]) continue;
    removed_atom[u] = true;
    for (const auto* e = adj.begin(u); e != adj.end(u); ++e) {
      if (removed_bond[e->bond]) continue;
      removed_bond[e->bond] = true;
      if (--deg[e->neighbor] <= 1 && !removed_atom[e->neighbor])
        leaves.push_back(e->neighbor);
    }
  }
  std::vector<bool> on_cycle(m.bonds.size(), false);
  for (std::size_t bi = 0; bi < m.bonds.size(); ++bi)
    on_cycle[bi] = !removed_bond[bi];
  return on_cycle;
}

}  // namespace

std::vector<bool> ring_bond_mask(const MolGraph& m) { return cycle_edges(m); }

std::vector<bool> ring_atom_mask(const MolGraph& m) {
  std::vector<bool> mask(m.atoms.size(), false);
  auto rb = ring_bond_mask(m);
  for (std::size_t bi = 0; bi < m.bonds.size(); ++bi)
    if (rb[bi]) {
      mask[m.bonds[bi].a] = true;
      mask[m.bonds[bi].b] = true;
    }
  return mask;
}

bool is_connected(const MolGraph& m) {
  if (m.atoms.empty()) return true;
  Adjacency adj(m);
  std::vector<bool> seen(m.atoms.size(), false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (const auto* e = adj.begin(u); e != adj.end(u); ++e)
      if (!seen[e->neighbor]) {
        seen[e->neighbor] = true;
        ++count;
        queue.push_back(e->neighbor);
      }
  }
  return count == m.atoms.size();
}

namespace {

// Simple-path DFS over aromatic bonds, looking for a path of 4 or 5 edges
// between the bond endpoints (closing a 5- or 6-cycle through the bond).
bool path_of_length(const MolGraph& m, const Adjacency& adj,
                    std::size_t bond_index, std::size_t u, std::size_t target,
                    int edges_left, std::vector<bool>& visited) {
  if (edges_left == 0) return u == target;
  if (u == target) return false;
  visited[u] = true;
  for (const auto* e = adj.begin(u); e != adj.end(u); ++e) {
    if (e->bond == bond_index) continue;
    if (m.bonds[e->bond].order != BondOrder::Aromatic) continue;
    if (visited[e->neighbor]) continue;
    if (path_of_length(m, adj, bond_index, e->neighbor, target, edges_left - 1,
                       visited)) {
      visited[u] = false;
      return true;
    }
  }
  visited[u] = false;
  return false;
}

bool on_aromatic_5_or_6_cycle(const MolGraph& m, const Adjacency& adj,
                              std::size_t bond_index) {
  const Bond& bond = m.bonds[bond_index];
  std::vector<bool> visited(m.atoms.size(), false);
  for (int edges : {4, 5})
    if (path_of_length(m, adj, bond_index, bond.a, bond.b, edges, visited))
      return true;
  return false;
}

}  // namespace

void validate_molecule(const MolGraph& m, bool require_connected,
                       bool allow_wildcards) {
  const std::size_t n = m.atoms.size();
  if (n > 0xffff) throw InvariantError("molecule too large");
  std::set<std::pair<std::uint16_t, std::uint16_t>> seen;
  for (const auto& b : m.bonds) {
    if (b.a >= n || b.b >= n) throw InvariantError("bond index out of range");
    if (b.a == b.b) throw InvariantError("self-loop bond");
    auto key = std::minmax(b.a, b.b);
    if (!seen.insert({key.first, key.second}).second)
      throw InvariantError("duplicate bond");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Atom& a = m.atoms[i];
    if (a.element == Element::Wild && !allow_wildcards)
      throw InvariantError("wildcard atom outside fragment context");
    if (a.aromatic && !aromatic_allowed(a.element))
      throw InvariantError("aromatic flag on element " +
                           std::string(element_symbol(a.element)));
    if (a.charge < -1 || a.charge > 1)
      throw InvariantError("charge outside {-1,0,+1}");
  }
  Adjacency adj(m);
  for (std::size_t bi = 0; bi < m.bonds.size(); ++bi) {
    const Bond& b = m.bonds[bi];
    if (b.order == BondOrder::Aromatic) {
      if (!m.atoms[b.a].aromatic || !m.atoms[b.b].aromatic)
        throw InvariantError("aromatic bond between non-aromatic atoms");
      if (!on_aromatic_5_or_6_cycle(m, adj, bi))
        throw InvariantError("aromatic bond not on an aromatic 5/6-ring");
    }
  }
  implicit_hydrogens(m, adj);
  if (require_connected && !is_connected(m))
    throw InvariantError("molecule not connected");
}

}  // namespace prexsyn::chem
