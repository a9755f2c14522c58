#pragma once

#include <string>
#include <vector>

#include "prexsyn/chem/mol.hpp"

namespace prexsyn::chem {

struct Canonical {
  std::string smiles;
  // Position of each original atom in the canonical output order. Used as
  // the tie-break ordering for pattern-match embeddings.
  std::vector<int> ranks;
};

// Canonical serialization: iterative neighborhood-label refinement, then
// individualization of the smallest tied class with the lexicographically
// smallest serialization as the winner. Two graphs are isomorphic
// (element/bond/aromatic/charge-respecting) iff their strings are equal.
Canonical canonicalize(const MolGraph& m);

std::string write_canonical(const MolGraph& m);

std::vector<int> canonical_ranks(const MolGraph& m);

}  // namespace prexsyn::chem
