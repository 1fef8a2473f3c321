#include "tfmd/cnn/checkpoint.hpp"

#include "tfmd/common/blob_io.hpp"
#include "tfmd/common/error.hpp"

namespace tfmd::cnn {

namespace {
constexpr const char* kFormat = "tfmd-checkpoint-v1";
}

void save_checkpoint(const std::filesystem::path& path, Network<float>& net, const CheckpointInfo& info) {
    const std::vector<float> params = net.flat_parameters();
    nlohmann::json header{{"format", kFormat},
                          {"architecture", to_json(net.architecture())},
                          {"seed", info.seed},
                          {"epoch", info.epoch}};
    write_header_blob(path, std::move(header), params);
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
    HeaderBlob blob = read_header_blob(path);
    if (blob.header.value("format", "") != kFormat) throw IoError(path.string() + ": not a checkpoint file");
    Network<float> net(architecture_from_json(blob.header.at("architecture")));
    if (blob.payload.size() != net.parameter_count()) {
        throw ShapeMismatch(path.string() + ": parameter count does not match the architecture");
    }
    net.set_flat_parameters(blob.payload);
    CheckpointInfo info{blob.header.at("seed").get<std::uint64_t>(), blob.header.at("epoch").get<std::size_t>()};
    return {std::move(net), info};
}

}  // namespace tfmd::cnn
