#include "prexsyn/query/compose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace prexsyn::query {

std::vector<double> softmax(const std::vector<double>& logits) {
  double max = -std::numeric_limits<double>::infinity();
  for (double z : logits) max = std::max(max, z);
  std::vector<double> out(logits.size(), 0.0);
  if (!std::isfinite(max)) return out;  // fully masked
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

std::vector<double> compose_step(const std::vector<WeightedLogits>& experts,
                                 const std::vector<bool>& mask,
                                 double temperature) {
  if (experts.empty()) throw InvariantError("compose_step: no experts");
  bool any_positive = false;
  const std::size_t n = experts.front().logits.size();
  for (const auto& e : experts) {
    if (e.logits.size() != n)
      throw InvariantError("compose_step: logits length mismatch");
    if (e.sign > 0) any_positive = true;
  }
  if (!any_positive)
    throw InvariantError("compose_step: all experts negated");
  if (!mask.empty() && mask.size() != n)
    throw InvariantError("compose_step: mask length mismatch");

  std::vector<double> combined(n, 0.0);
  for (const auto& e : experts) {
    double scale = e.sign * e.weight;
    for (std::size_t i = 0; i < n; ++i) combined[i] += scale * e.logits[i];
  }
  if (temperature != 1.0) {
    for (double& z : combined) z /= temperature;
  }
  if (!mask.empty()) {
    for (std::size_t i = 0; i < n; ++i)
      if (!mask[i]) combined[i] = -std::numeric_limits<double>::infinity();
  }
  return softmax(combined);
}

}  // namespace prexsyn::query
