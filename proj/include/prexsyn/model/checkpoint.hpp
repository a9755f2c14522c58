#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "prexsyn/model/adam.hpp"
#include "prexsyn/model/transformer.hpp"

namespace prexsyn::model {

inline constexpr char kCheckpointMagic[4] = {'P', 'R', 'X', 'S'};
inline constexpr std::uint16_t kCheckpointVersion = 1;

// Optional training continuation state stored alongside the parameters.
struct TrainState {
  std::uint64_t step = 0;
  std::uint64_t samples_seen = 0;
  std::vector<double> adam_m;
  std::vector<double> adam_v;
  std::string rng_state;  // serialized mt19937_64 stream
};

// Checkpoint layout: magic `PRXS`, version u16 LE, u32 config JSON length +
// JSON, named little-endian float32 parameter blobs, optional train-state
// sections, trailing 64-bit checksum of everything before it.
void save_checkpoint(const std::filesystem::path& path,
                     const Transformer<float>& model,
                     const TrainState* state = nullptr);

struct LoadedCheckpoint {
  ModelConfig config;
  std::optional<TrainState> state;
};

// Fills `model` (constructed from the stored config by the caller via
// peek_config) with the stored parameters.
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path,
                                 Transformer<float>& model);

ModelConfig peek_config(const std::filesystem::path& path);

}  // namespace prexsyn::model
