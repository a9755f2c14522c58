#pragma once

#include <cmath>
#include <vector>

#include "prexsyn/model/param_store.hpp"

namespace prexsyn::model {

// Cosine annealing from lr0 down to eta_min over total_steps.
struct CosineSchedule {
  double lr0 = 3e-4;
  double eta_min = 1e-5;
  std::uint64_t total_steps = 1;

  double at(std::uint64_t step) const {
    if (total_steps <= 1) return eta_min;
    double t = static_cast<double>(step) / static_cast<double>(total_steps - 1);
    if (t > 1.0) t = 1.0;
    return eta_min + 0.5 * (lr0 - eta_min) * (1.0 + std::cos(M_PI * t));
  }
};

template <typename Scalar>
class Adam {
 public:
  explicit Adam(std::size_t n_params, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : beta1_(beta1), beta2_(beta2), eps_(eps), m_(n_params, 0), v_(n_params, 0) {}

  void step(std::vector<Scalar>& params, const std::vector<Scalar>& grads,
            double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
      double g = static_cast<double>(grads[i]);
      m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
      v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g * g;
      double mhat = m_[i] / bc1;
      double vhat = v_[i] / bc2;
      params[i] -= static_cast<Scalar>(lr * mhat / (std::sqrt(vhat) + eps_));
    }
  }

  std::uint64_t steps_taken() const { return t_; }
  std::vector<double>& m() { return m_; }
  std::vector<double>& v() { return v_; }
  void set_steps(std::uint64_t t) { t_ = t; }

 private:
  double beta1_, beta2_, eps_;
  std::uint64_t t_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

}  // namespace prexsyn::model
