#include "prexsyn/model/grad_check.hpp"

namespace prexsyn::model {

GradCheckResult grad_check(Transformer<double>& model,
                           const engine::FeaturizedBatch& batch,
                           double epsilon, int samples_per_tensor,
                           std::uint64_t seed) {
  using Input = Transformer<double>::Input;
  Input in = Input::from_batch(batch);

  model.store().zero_grad();
  auto fwd = model.forward(in);
  model.backward(fwd, in, batch);

  Rng rng = make_rng(seed, 0x6c4d);
  GradCheckResult result;
  double rel_sum = 0.0;
  auto& data = model.store().data();
  const auto& grad = model.store().grad_data();

  for (const auto& entry : model.store().entries()) {
    const std::size_t n = std::size_t(entry.rows) * entry.cols;
    for (int s = 0; s < samples_per_tensor; ++s) {
      std::size_t i = entry.offset + uniform_index(rng, n);
      double saved = data[i];
      data[i] = saved + epsilon;
      double up = model.loss(model.forward(in), batch).loss;
      data[i] = saved - epsilon;
      double down = model.loss(model.forward(in), batch).loss;
      data[i] = saved;
      double numeric = (up - down) / (2.0 * epsilon);
      double analytic = grad[i];
      double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
      double rel = std::abs(numeric - analytic) / denom;
      result.max_rel_error = std::max(result.max_rel_error, rel);
      rel_sum += rel;
      ++result.checked;
    }
  }
  result.mean_rel_error = result.checked ? rel_sum / result.checked : 0.0;
  return result;
}

}  // namespace prexsyn::model
