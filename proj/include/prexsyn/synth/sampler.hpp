#pragma once

#include <map>
#include <optional>
#include <random>

#include "prexsyn/util/rng.hpp"

#include "prexsyn/synth/program.hpp"

namespace prexsyn::synth {

// (template id, slot index) -> sorted building-block ids whose graphs match
// the slot pattern.
class CompatibilityIndex {
 public:
  CompatibilityIndex() = default;

  const std::vector<int>& compatible(int template_id, int slot) const {
    return slots_.at({template_id, slot});
  }
  bool empty_slot(int template_id, int slot) const {
    return compatible(template_id, slot).empty();
  }
  const std::vector<std::pair<int, int>>& empty_slots() const {
    return empty_slots_;
  }

  static CompatibilityIndex build(const Library& lib, const Registry& reg,
                                  int workers = 1);

 private:
  std::map<std::pair<int, int>, std::vector<int>> slots_;
  std::vector<std::pair<int, int>> empty_slots_;
};

struct PathwayConfig {
  int max_depth = 3;          // maximum reaction count
  double depth_p = 0.5;       // geometric(p) over reaction counts, truncated
  int retry_budget = 16;      // template/operand retries per attempt
  int max_product_atoms = 96; // resample when a product grows past this
};

struct PathwaySample {
  PostfixProgram program;
  chem::MolGraph product;
};

// Bottom-up random synthesis tree: draws a reaction count from the truncated
// geometric law, picks templates uniformly and leaf operands uniformly from
// the compatible sets, and re-matches intermediate products against slot
// patterns (consuming the retry budget on failures). Returns nullopt when
// the retry budget is exhausted; callers resample.
std::optional<PathwaySample> sample_random_pathway(
    Rng& rng, const Library& lib, const Registry& reg,
    const CompatibilityIndex& index, const PathwayConfig& cfg);

}  // namespace prexsyn::synth
