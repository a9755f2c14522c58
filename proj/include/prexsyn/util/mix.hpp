#pragma once

#include <cstdint>

namespace prexsyn {

// splitmix64 finalizer. All fingerprint/fragment hashing and seed derivation
// in the project flows through this one mixing function so results are
// bit-exact across platforms.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed + 0x9e3779b97f4a7c15ULL + value);
}

// Seed for a named RNG stream, e.g. producer i of a pipeline with base seed s.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return hash_combine(mix64(base), stream);
}

inline std::uint64_t hash_bytes(const void* data, std::size_t n,
                                std::uint64_t seed = 0) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = mix64(seed ^ (0x517cc1b727220a95ULL + n));
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    std::uint64_t w = 0;
    for (int k = 0; k < 8; ++k) w |= std::uint64_t(p[i + k]) << (8 * k);
    h = hash_combine(h, w);
  }
  std::uint64_t tail = 0;
  for (int k = 0; i < n; ++i, ++k) tail |= std::uint64_t(p[i]) << (8 * k);
  if (n % 8) h = hash_combine(h, tail);
  return h;
}

}  // namespace prexsyn
