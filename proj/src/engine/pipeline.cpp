#include "prexsyn/engine/pipeline.hpp"

#include <cmath>

#include "prexsyn/util/errors.hpp"

namespace prexsyn::engine {

void PipelineConfig::validate() const {
  if (producers < 1) throw ConfigError("pipeline needs at least one producer");
  if (capacity < batch_size)
    throw ConfigError("buffer capacity must be >= batch size");
  double sum = 0.0;
  for (double w : mixture) {
    if (w < 0.0) throw ConfigError("negative mixture weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ConfigError("property mixture weights must sum to 1");
}

namespace {

props::PropertyType draw_type(
    Rng& rng, const std::array<double, props::kPropertyTypeCount>& mixture) {
  double u = uniform_real(rng);
  double acc = 0.0;
  for (int i = 0; i < props::kPropertyTypeCount; ++i) {
    acc += mixture[i];
    if (u < acc) return static_cast<props::PropertyType>(i);
  }
  return props::PropertyType::Descriptors;
}

}  // namespace

TrainingSample Pipeline::generate_one(Rng& rng,
                                      const synth::Universe& universe,
                                      const synth::CompatibilityIndex& index,
                                      const PipelineConfig& cfg) {
  while (true) {
    auto path = synth::sample_random_pathway(rng, universe.library,
                                             universe.registry, index,
                                             cfg.pathway);
    if (!path) continue;  // retry budget exhausted: resample
    TrainingSample sample;
    sample.prompt = props::compute_prompt(path->product,
                                          draw_type(rng, cfg.mixture), rng);
    sample.program = std::move(path->program);
    sample.product = chem::write_canonical(path->product);
    return sample;
  }
}

Pipeline::Pipeline(PipelineConfig cfg, const synth::Universe& universe,
                   const synth::CompatibilityIndex& index)
    : cfg_(cfg),
      universe_(universe),
      index_(index),
      queue_(static_cast<std::size_t>(cfg.capacity)) {
  cfg_.validate();
  if (universe_.library.size() == 0)
    throw ConfigError("pipeline startup: empty universe");
  producer_hash_.assign(cfg_.producers, 0);
  for (int i = 0; i < cfg_.producers; ++i)
    per_producer_.push_back(std::make_unique<std::atomic<std::uint64_t>>(0));
  for (int i = 0; i < cfg_.producers; ++i)
    producers_.emplace_back([this, i] { producer_loop(i); });
}

Pipeline::~Pipeline() {
  stop_.store(true);
  queue_.close();
  for (auto& t : producers_)
    if (t.joinable()) t.join();
}

void Pipeline::producer_loop(int producer_index) {
  constexpr int kHashPrefix = 256;
  Rng rng = make_rng(cfg_.base_seed, static_cast<std::uint64_t>(producer_index));
  int hashed = 0;
  while (!stop_.load(std::memory_order_relaxed)) {
    TrainingSample sample = generate_one(rng, universe_, index_, cfg_);
    if (hashed < kHashPrefix) {
      producer_hash_[producer_index] =
          hash_combine(producer_hash_[producer_index],
                       hash_bytes(sample.product.data(), sample.product.size()));
      ++hashed;
    }
    if (!queue_.push(std::move(sample))) return;  // closed
    produced_.fetch_add(1, std::memory_order_relaxed);
    per_producer_[producer_index]->fetch_add(1, std::memory_order_relaxed);
  }
}

std::uint64_t Pipeline::sample_hash() const {
  std::uint64_t h = 0;
  for (std::size_t i = 0; i < producer_hash_.size(); ++i)
    h = hash_combine(h, producer_hash_[i]);
  return h;
}

std::optional<TrainingSample> Pipeline::next() {
  auto item = queue_.pop();
  if (item) consumed_.fetch_add(1, std::memory_order_relaxed);
  return item;
}

std::vector<TrainingSample> Pipeline::next_batch(int n) {
  std::vector<TrainingSample> batch;
  batch.reserve(n);
  for (int i = 0; i < n; ++i) {
    auto item = next();
    if (!item) break;
    batch.push_back(std::move(*item));
  }
  return batch;
}

void Pipeline::shutdown() {
  stop_.store(true);
  queue_.close();
  for (auto& t : producers_)
    if (t.joinable()) t.join();
}

}  // namespace prexsyn::engine
