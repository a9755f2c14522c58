#pragma once

#include <vector>

#include "prexsyn/engine/pipeline.hpp"

namespace prexsyn::engine {

struct BenchReport {
  double seconds = 0.0;
  std::uint64_t samples = 0;
  double rate = 0.0;  // samples / second, aggregate
  std::vector<std::uint64_t> per_producer;
  std::vector<double> per_producer_rate;
  std::uint64_t sample_hash = 0;  // seed-deterministic prefix hash
};

// Steady-state production rate with a null consumer. `duration_s == 0`
// reports zero samples and zero rate. When `fixed_samples > 0`, the run
// instead drains exactly that many samples and times it.
BenchReport bench_throughput(const PipelineConfig& cfg,
                             const synth::Universe& universe,
                             const synth::CompatibilityIndex& index,
                             double duration_s, std::uint64_t fixed_samples = 0);

}  // namespace prexsyn::engine
