#pragma once

#include <vector>

#include "prexsyn/util/errors.hpp"

namespace prexsyn::query {

// One expert's contribution to a composition step: full-vocabulary logits
// (log-probabilities are the canonical choice) plus sign and weight.
struct WeightedLogits {
  std::vector<double> logits;
  int sign = +1;       // +1 conjunction, -1 negation
  double weight = 1.0; // alpha / beta
};

// softmax(sum_k sign_k * weight_k * z_k): equals the normalized elementwise
// product/quotient of the per-expert softmax distributions raised to their
// weights. Requires at least one positive-sign entry and equal lengths.
// Entries drop to exactly 0 where `mask` (when non-empty) is false.
std::vector<double> compose_step(const std::vector<WeightedLogits>& experts,
                                 const std::vector<bool>& mask = {},
                                 double temperature = 1.0);

std::vector<double> softmax(const std::vector<double>& logits);

}  // namespace prexsyn::query
