#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "prexsyn/props/prompt.hpp"
#include "prexsyn/synth/sampler.hpp"

namespace prexsyn::engine {

struct TrainingSample {
  props::PropertyPrompt prompt;
  synth::PostfixProgram program;
  std::string product;  // canonical string
};

struct PipelineConfig {
  int producers = 1;
  int capacity = 4096;  // samples
  int batch_size = 256;
  std::uint64_t base_seed = 0;
  // FpStruct, FpPharm, Fragments, Descriptors, Substruct. The paper's four
  // training property types get uniform weight by default; Substruct prompts
  // (fragment subsets) are available for constraint conditioning when
  // enabled.
  std::array<double, props::kPropertyTypeCount> mixture = {0.25, 0.25, 0.25,
                                                           0.25, 0.0};
  synth::PathwayConfig pathway;

  void validate() const;
};

// Blocking bounded FIFO with shutdown-and-drain semantics.
template <typename T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t capacity) : capacity_(capacity) {}

  // Returns false when the queue is closed (item dropped).
  bool push(T item) {
    std::unique_lock lock(mutex_);
    not_full_.wait(lock,
                   [&] { return closed_ || items_.size() < capacity_; });
    if (closed_) return false;
    items_.push_back(std::move(item));
    peak_ = std::max(peak_, items_.size());
    not_empty_.notify_one();
    return true;
  }

  // Returns nullopt when closed and drained.
  std::optional<T> pop() {
    std::unique_lock lock(mutex_);
    not_empty_.wait(lock, [&] { return closed_ || !items_.empty(); });
    if (items_.empty()) return std::nullopt;
    T item = std::move(items_.front());
    items_.pop_front();
    not_full_.notify_one();
    return item;
  }

  void close() {
    std::lock_guard lock(mutex_);
    closed_ = true;
    not_full_.notify_all();
    not_empty_.notify_all();
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return items_.size();
  }

  std::size_t peak() const {
    std::lock_guard lock(mutex_);
    return peak_;
  }

 private:
  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::condition_variable not_full_;
  std::condition_variable not_empty_;
  std::deque<T> items_;
  std::size_t peak_ = 0;
  bool closed_ = false;
};

// Multi-producer, single-consumer stream of training samples. Producer i
// draws from an RNG seeded with derive_seed(base_seed, i); property types are
// drawn from the mixture; every sample's program evaluates successfully and
// its prompt is computed from the program's product.
class Pipeline {
 public:
  Pipeline(PipelineConfig cfg, const synth::Universe& universe,
           const synth::CompatibilityIndex& index);
  ~Pipeline();

  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;

  // Blocks until a sample is available; nullopt after shutdown + drain.
  std::optional<TrainingSample> next();
  // Up to `n` samples; fewer only at end of stream.
  std::vector<TrainingSample> next_batch(int n);

  // Stop producers; the buffer keeps draining through next().
  void shutdown();

  std::uint64_t produced() const { return produced_.load(); }
  std::uint64_t consumed() const { return consumed_.load(); }
  std::uint64_t produced_by(int producer) const {
    return per_producer_[producer]->load();
  }
  // Mixed hash of each producer's first samples; deterministic for a given
  // seed regardless of thread interleaving.
  std::uint64_t sample_hash() const;
  std::size_t buffered() const { return queue_.size(); }
  std::size_t peak_occupancy() const { return queue_.peak(); }

  // Synchronous single-threaded generation with an external RNG; the
  // deterministic mode used by training checkpoints and tests.
  static TrainingSample generate_one(Rng& rng, const synth::Universe& universe,
                                     const synth::CompatibilityIndex& index,
                                     const PipelineConfig& cfg);

 private:
  void producer_loop(int producer_index);

  PipelineConfig cfg_;
  const synth::Universe& universe_;
  const synth::CompatibilityIndex& index_;
  BoundedQueue<TrainingSample> queue_;
  std::vector<std::thread> producers_;
  std::atomic<bool> stop_{false};
  std::atomic<std::uint64_t> produced_{0};
  std::atomic<std::uint64_t> consumed_{0};
  std::vector<std::unique_ptr<std::atomic<std::uint64_t>>> per_producer_;
  std::vector<std::uint64_t> producer_hash_;
};

}  // namespace prexsyn::engine
