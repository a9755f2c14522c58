#pragma once

#include <cstdint>

#include "prexsyn/synth/universe.hpp"

namespace prexsyn::synth {

struct UniverseGenConfig {
  int n_blocks = 300;
  std::uint64_t seed = 0;
};

// Deterministically generates the default toy universe: building blocks
// spread over ten reactive-group families (acid, amine, alcohol, aldehyde,
// aryl bromide, alkyl chloride, aryl boronate, terminal alkyne, thiol,
// amino acid) with varying polar/greasy decoration, plus the fixed
// ten-template registry. Every template slot is compatible with at least one
// block.
Universe generate_universe(const UniverseGenConfig& cfg);

// The fixed default template set (ids 0..9).
Registry default_registry();

}  // namespace prexsyn::synth
