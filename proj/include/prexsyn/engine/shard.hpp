#pragma once

#include <filesystem>
#include <vector>

#include "prexsyn/engine/pipeline.hpp"

namespace prexsyn::engine {

inline constexpr char kShardMagic[4] = {'P', 'R', 'X', 'D'};
inline constexpr std::uint16_t kShardVersion = 1;

// Shard format: magic `PRXD`, version u16 LE, then length-prefixed records
// (u32 LE length + payload). Lossless round trip; truncation and version
// mismatches raise IoError.
void write_shard(const std::vector<TrainingSample>& samples,
                 const std::filesystem::path& path);
std::vector<TrainingSample> read_shard(const std::filesystem::path& path);

}  // namespace prexsyn::engine
