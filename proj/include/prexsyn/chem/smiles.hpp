#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "prexsyn/chem/mol.hpp"

namespace prexsyn::chem {

// Parse the SMILES subset documented in docs/smiles_grammar.md. Elements
// B C N O P S F Cl Br I, aromatic c/n/o/s, branches, ring closures 1-9,
// bonds - = #, bracket atoms with a single +/- charge, [*] wildcards.
// The parse validates the resulting graph (connectivity included unless
// `require_connected` is false). Throws ParseError / ValenceError /
// InvariantError.
MolGraph parse_smiles(std::string_view text, bool require_connected = true,
                      bool allow_wildcards = false);

// Serialize following ascending `rank` (a total order over atoms; used by
// canonicalization). `emission_order`, when non-null, receives the position
// of every atom in the output.
std::string write_smiles_ordered(const MolGraph& m,
                                 const std::vector<int>& rank,
                                 std::vector<int>* emission_order = nullptr);

}  // namespace prexsyn::chem
