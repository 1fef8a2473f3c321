#pragma once

#include "tfmd/cnn/network.hpp"

#include <cstdint>
#include <filesystem>

namespace tfmd::cnn {

struct CheckpointInfo {
    std::uint64_t seed = 0;
    std::size_t epoch = 0;
};

// JSON header {format, architecture, seed, epoch, n_floats} followed by the
// parameters as little-endian float32 in Network::parameters() order.
void save_checkpoint(const std::filesystem::path& path, Network<float>& net, const CheckpointInfo& info);

struct LoadedCheckpoint {
    Network<float> network;
    CheckpointInfo info;
};

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace tfmd::cnn
