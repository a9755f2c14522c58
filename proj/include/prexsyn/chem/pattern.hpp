#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "prexsyn/chem/mol.hpp"

namespace prexsyn::chem {

enum class AromConstraint : std::uint8_t { Yes, No, Any };
enum class BondConstraint : std::uint8_t { Single, Double, Triple, Aromatic, Any };

struct PatternAtom {
  std::vector<Element> elements;  // sorted; empty means any element
  AromConstraint arom = AromConstraint::Any;
  int min_degree = 0;
  int max_degree = 64;
  int map = 0;  // 1 = anchor, 2 = second anchor (arity-1), >= 90 = leaving
};

struct PatternBond {
  std::uint16_t a = 0;
  std::uint16_t b = 0;
  BondConstraint order = BondConstraint::Single;
};

struct PatternGraph {
  std::vector<PatternAtom> atoms;
  std::vector<PatternBond> bonds;
  int anchor = -1;
  int anchor2 = -1;
  std::vector<int> leaving;

  std::size_t size() const { return atoms.size(); }
};

// Pattern syntax: the SMILES subset extended with bracket map numbers and
// match constraints, e.g. `[C:1](=O)[O:90]`, `[C,N;D1-2:1]`, `[*:90]`,
// bond `~` for any order. Case selects the aromatic constraint (C aliphatic,
// c aromatic, * any). Validates: exactly one map-1 anchor, at most one map-2,
// connected, and leaving-atom removal keeps the anchor in the remaining
// component. Throws ParseError / InvariantError.
PatternGraph parse_pattern(std::string_view text);

std::string pattern_to_string(const PatternGraph& p);

bool atom_matches(const PatternAtom& pa, const MolGraph& m,
                  const Adjacency& adj, std::size_t atom);
bool bond_matches(BondConstraint c, BondOrder order);

// All injective constraint-preserving embeddings (pattern index -> molecule
// index), sorted lexicographically by the image sequence under the canonical
// atom ranks of m.
std::vector<std::vector<int>> match_pattern(const PatternGraph& p,
                                            const MolGraph& m);

// Match without the canonical-rank sort (arbitrary deterministic order);
// cheaper when only existence or count is needed.
std::vector<std::vector<int>> match_pattern_unsorted(const PatternGraph& p,
                                                     const MolGraph& m);

bool has_match(const PatternGraph& p, const MolGraph& m);

}  // namespace prexsyn::chem
