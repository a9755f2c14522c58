#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prexsyn/util/errors.hpp"

namespace prexsyn::chem {

enum class Element : std::uint8_t { B, C, N, O, P, S, F, Cl, Br, I, Wild };

constexpr int kElementCount = 11;

std::string_view element_symbol(Element e);
std::optional<Element> element_from_symbol(std::string_view s);
double atomic_weight(Element e);

// Fixed valence table of the toy chemistry. Wild (the open-valence marker
// used in fragment serialization) takes no implicit hydrogens.
constexpr int default_valence(Element e) {
  switch (e) {
    case Element::B: return 3;
    case Element::C: return 4;
    case Element::N: return 3;
    case Element::O: return 2;
    case Element::P: return 3;
    case Element::S: return 2;
    case Element::F:
    case Element::Cl:
    case Element::Br:
    case Element::I: return 1;
    case Element::Wild: return 0;
  }
  return 0;
}

constexpr bool aromatic_allowed(Element e) {
  return e == Element::C || e == Element::N || e == Element::O ||
         e == Element::S;
}

enum class BondOrder : std::uint8_t { Single = 1, Double = 2, Triple = 3, Aromatic = 4 };

struct Atom {
  Element element = Element::C;
  bool aromatic = false;
  std::int8_t charge = 0;  // limited to {-1, 0, +1}

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Bond {
  std::uint16_t a = 0;
  std::uint16_t b = 0;
  BondOrder order = BondOrder::Single;
};

struct MolGraph {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;

  std::size_t size() const { return atoms.size(); }
  bool empty() const { return atoms.empty(); }

  std::size_t add_atom(Atom a) {
    atoms.push_back(a);
    return atoms.size() - 1;
  }
  void add_bond(std::size_t a, std::size_t b, BondOrder order) {
    bonds.push_back({static_cast<std::uint16_t>(a),
                     static_cast<std::uint16_t>(b), order});
  }
};

// CSR neighbor lists; (neighbor atom, bond index) pairs.
class Adjacency {
 public:
  struct Edge {
    std::uint16_t neighbor;
    std::uint16_t bond;
  };

  explicit Adjacency(const MolGraph& m);

  const Edge* begin(std::size_t atom) const { return edges_.data() + offsets_[atom]; }
  const Edge* end(std::size_t atom) const { return edges_.data() + offsets_[atom + 1]; }
  int degree(std::size_t atom) const {
    return static_cast<int>(offsets_[atom + 1] - offsets_[atom]);
  }

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<Edge> edges_;
};

// Contribution of one bond to the valence of endpoint `e`. Aromatic bonds
// count 1.5 toward C/N and 1.0 toward O/S (the lone pair supplies the ring
// contribution); the total is floored before computing implicit hydrogens.
double bond_valence_contribution(BondOrder order, Element e);

// Implicit hydrogen count per atom. Throws ValenceError when negative.
std::vector<int> implicit_hydrogens(const MolGraph& m);
std::vector<int> implicit_hydrogens(const MolGraph& m, const Adjacency& adj);

std::vector<int> heavy_degrees(const MolGraph& m);

// Bonds that lie on some cycle.
std::vector<bool> ring_bond_mask(const MolGraph& m);
std::vector<bool> ring_atom_mask(const MolGraph& m);

bool is_connected(const MolGraph& m);

// Full invariant check: simple graph, valences, aromatic flags restricted to
// C/N/O/S, every aromatic bond on a 5- or 6-cycle of aromatic atoms, and
// (optionally) connectivity. Throws InvariantError/ValenceError.
void validate_molecule(const MolGraph& m, bool require_connected = true,
                       bool allow_wildcards = false);

}  // namespace prexsyn::chem
