#pragma once

#include "prexsyn/model/transformer.hpp"

namespace prexsyn::model {

struct GradCheckResult {
  double max_rel_error = 0.0;
  double mean_rel_error = 0.0;
  std::size_t checked = 0;
};

// Central finite differences on a random parameter subset against the
// analytic backward pass. Double precision.
GradCheckResult grad_check(Transformer<double>& model,
                           const engine::FeaturizedBatch& batch,
                           double epsilon, int samples_per_tensor,
                           std::uint64_t seed);

}  // namespace prexsyn::model
