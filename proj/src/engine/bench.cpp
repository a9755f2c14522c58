#include "prexsyn/engine/bench.hpp"

#include <chrono>

namespace prexsyn::engine {

BenchReport bench_throughput(const PipelineConfig& cfg,
                             const synth::Universe& universe,
                             const synth::CompatibilityIndex& index,
                             double duration_s, std::uint64_t fixed_samples) {
  BenchReport report;
  if (duration_s <= 0.0 && fixed_samples == 0) {
    report.per_producer.assign(cfg.producers, 0);
    report.per_producer_rate.assign(cfg.producers, 0.0);
    return report;
  }
  using clock = std::chrono::steady_clock;
  Pipeline pipeline(cfg, universe, index);
  auto start = clock::now();
  auto deadline = start + std::chrono::duration_cast<clock::duration>(
                              std::chrono::duration<double>(duration_s));
  std::uint64_t drained = 0;
  while (true) {
    if (fixed_samples > 0) {
      if (drained >= fixed_samples) break;
    } else if (clock::now() >= deadline) {
      break;
    }
    auto item = pipeline.next();
    if (!item) break;
    ++drained;
  }
  pipeline.shutdown();
  // drain what is left so produced == consumed
  while (pipeline.next()) ++drained;
  auto elapsed = std::chrono::duration<double>(clock::now() - start).count();

  report.seconds = elapsed;
  report.samples = drained;
  report.rate = elapsed > 0 ? static_cast<double>(drained) / elapsed : 0.0;
  for (int i = 0; i < cfg.producers; ++i) {
    report.per_producer.push_back(pipeline.produced_by(i));
    report.per_producer_rate.push_back(
        elapsed > 0 ? static_cast<double>(pipeline.produced_by(i)) / elapsed
                    : 0.0);
  }
  report.sample_hash = pipeline.sample_hash();
  return report;
}

}  // namespace prexsyn::engine
