#include "tfmd/cnn/architecture.hpp"

#include "tfmd/common/error.hpp"

namespace tfmd::cnn {

std::string to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::Conv2D: return "conv2d";
        case LayerKind::ReLU: return "relu";
        case LayerKind::MaxPool: return "maxpool2";
        case LayerKind::Flatten: return "flatten";
        case LayerKind::Dense: return "dense";
        case LayerKind::Softmax: return "softmax";
    }
    return "unknown";
}

namespace {

LayerKind kind_from_string(const std::string& s) {
    for (auto k : {LayerKind::Conv2D, LayerKind::ReLU, LayerKind::MaxPool, LayerKind::Flatten, LayerKind::Dense,
                   LayerKind::Softmax}) {
        if (to_string(k) == s) return k;
    }
    throw InvalidArgument("unknown layer kind: " + s);
}

}  // namespace

Architecture Architecture::compact_default() {
    Architecture a;
    a.layers = {
        {LayerKind::Conv2D, 3, 16, 0}, {LayerKind::ReLU},        {LayerKind::MaxPool},
        {LayerKind::Conv2D, 3, 32, 0}, {LayerKind::ReLU},        {LayerKind::MaxPool},
        {LayerKind::Flatten},          {LayerKind::Dense, 0, 0, 64}, {LayerKind::ReLU},
        {LayerKind::Dense, 0, 0, 5},   {LayerKind::Softmax},
    };
    return a;
}

nlohmann::json to_json(const Architecture& a) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& l : a.layers) {
        nlohmann::json j = {{"kind", to_string(l.kind)}};
        if (l.kind == LayerKind::Conv2D) {
            j["kernel"] = l.kernel;
            j["out_channels"] = l.out_channels;
        }
        if (l.kind == LayerKind::Dense) j["units"] = l.units;
        layers.push_back(j);
    }
    return {{"input", {a.in_channels, a.in_height, a.in_width}}, {"num_classes", a.num_classes}, {"layers", layers}};
}

Architecture architecture_from_json(const nlohmann::json& j) {
    Architecture a;
    const auto input = j.at("input").get<std::vector<int>>();
    if (input.size() != 3) throw InvalidArgument("architecture input must be [channels, height, width]");
    a.in_channels = input[0];
    a.in_height = input[1];
    a.in_width = input[2];
    a.num_classes = j.at("num_classes").get<int>();
    for (const auto& l : j.at("layers")) {
        LayerSpec spec{kind_from_string(l.at("kind").get<std::string>())};
        spec.kernel = l.value("kernel", 0);
        spec.out_channels = l.value("out_channels", 0);
        spec.units = l.value("units", 0);
        a.layers.push_back(spec);
    }
    return a;
}

}  // namespace tfmd::cnn
