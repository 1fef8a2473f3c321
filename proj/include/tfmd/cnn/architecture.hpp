#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace tfmd::cnn {

enum class LayerKind { Conv2D, ReLU, MaxPool, Flatten, Dense, Softmax };

std::string to_string(LayerKind kind);

// Conv2D uses `kernel` (odd, stride 1, same padding) and `out_channels`;
// Dense uses `units`; MaxPool is always 2x2 with stride 2.
struct LayerSpec {
    LayerKind kind;
    int kernel = 0;
    int out_channels = 0;
    int units = 0;

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct Architecture {
    int in_channels = 3;
    int in_height = 64;
    int in_width = 64;
    int num_classes = 5;
    std::vector<LayerSpec> layers;

    /// Conv 3x3x16 + ReLU, MaxPool, Conv 3x3x32 + ReLU, MaxPool, Flatten,
    /// Dense 64 + ReLU, Dense 5, Softmax on 3x64x64 input.
    static Architecture compact_default();

    friend bool operator==(const Architecture&, const Architecture&) = default;
};

nlohmann::json to_json(const Architecture& a);
Architecture architecture_from_json(const nlohmann::json& j);

}  // namespace tfmd::cnn
