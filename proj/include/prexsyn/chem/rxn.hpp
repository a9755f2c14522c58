#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prexsyn/chem/mol.hpp"
#include "prexsyn/chem/pattern.hpp"

namespace prexsyn::chem {

struct ReactionTemplate {
  int id = -1;
  int arity = 1;  // 1 or 2
  std::vector<PatternGraph> slot_patterns;
  std::vector<std::string> slot_sources;  // pattern text as loaded/authored
  BondOrder bond_order = BondOrder::Single;  // single or double
};

enum class ApplyError : std::uint8_t {
  None,
  NoMatch,           // some slot pattern has no embedding
  ValenceViolation,  // new bond exceeds an anchor valence (or duplicates one)
  DisconnectedProduct,
};

struct ApplyResult {
  std::optional<MolGraph> product;
  ApplyError error = ApplyError::None;
  int slot = -1;  // offending slot for NoMatch

  explicit operator bool() const { return product.has_value(); }
};

// Rewrite: per slot, the lexicographically first embedding (under canonical
// atom ranks) is selected; leaving atoms and their bonds are deleted; a bond
// of t.bond_order is added between the slot anchors (arity 2) or between the
// map-1/map-2 anchors of the single bifunctional pattern (arity 1; identity
// rewrites have no map-2 atom and add no bond). The connected component
// containing the anchor is returned and revalidated.
ApplyResult apply_template(const ReactionTemplate& t,
                           const std::vector<MolGraph>& operands);

}  // namespace prexsyn::chem
