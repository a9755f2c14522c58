#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prexsyn/chem/mol.hpp"

namespace prexsyn::props {

inline constexpr int kFragmentTableSize = 4096;

// Sorted unique ids into the fixed fragment hash table.
struct FragmentSet {
  std::vector<std::uint32_t> ids;

  bool contains(std::uint32_t id) const;
  bool contains_all(const FragmentSet& other) const;

  friend bool operator==(const FragmentSet&, const FragmentSet&) = default;
};

// BRICS-flavoured decomposition: cut every acyclic single bond joining a
// ring atom to a non-ring atom of heavy degree >= 2; cap the open valences
// with wildcard atoms; canonicalize each piece and hash it into the table.
FragmentSet fragments(const chem::MolGraph& m,
                      int table_size = kFragmentTableSize);

// Canonical fragment strings, for inspection and stability tests.
std::vector<std::string> fragment_strings(const chem::MolGraph& m);

std::uint32_t fragment_id(const std::string& canonical_fragment,
                          int table_size = kFragmentTableSize);

}  // namespace prexsyn::props
