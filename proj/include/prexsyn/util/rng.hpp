#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "prexsyn/util/mix.hpp"

namespace prexsyn {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t base_seed, std::uint64_t stream) {
  return Rng(derive_seed(base_seed, stream));
}

// Uniform in [0, 1). Implemented directly on the raw 64-bit stream so results
// do not depend on the standard library's distribution internals.
inline double uniform_real(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in [0, n). Modulo bias is irrelevant at the n we use (< 2^20).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  return rng() % n;
}

inline double uniform_range(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_real(rng);
}

// Box-Muller; one value per call.
inline double normal(Rng& rng) {
  double u1 = uniform_real(rng);
  double u2 = uniform_real(rng);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace prexsyn
