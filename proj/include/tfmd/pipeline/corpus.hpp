#pragma once

#include "tfmd/cnn/train.hpp"
#include "tfmd/imaging/render.hpp"
#include "tfmd/motorsim/dataset.hpp"
#include "tfmd/tfr/transform.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace tfmd::pipeline {

/// Rendering used for the CNN corpora: -60 dB floor and a 0-500 Hz crop,
/// where every synthetic fault signature lives.
imaging::RenderOptions corpus_render_defaults();

nlohmann::json to_json(const imaging::RenderOptions& o);
imaging::RenderOptions render_options_from_json(const nlohmann::json& j, imaging::RenderOptions base);
nlohmann::json to_json(const tfr::TransformConfig& c);
tfr::TransformConfig transform_config_from_json(const nlohmann::json& j, tfr::TransformConfig base = {});

struct CorpusEntry {
    std::string path;  // PNG path relative to the corpus root
    int label;
    int load;
    std::uint64_t seed;

    friend bool operator==(const CorpusEntry&, const CorpusEntry&) = default;
};

struct ImageCorpus {
    std::string method;  // method code
    std::vector<CorpusEntry> entries;
};

nlohmann::json to_json(const ImageCorpus& c);
ImageCorpus image_corpus_from_json(const nlohmann::json& j);

/// Renders every manifest signal with `method` into
/// out_dir/all/<class>/<load>/<seed>.png and writes out_dir/manifest.json.
/// Corpora are not split at render time; folds are drawn during
/// cross-validation, hence the single "all" split.
ImageCorpus render_corpus(const std::filesystem::path& dataset_dir, tfr::Method method,
                          const std::filesystem::path& out_dir, const tfr::TransformConfig& tcfg,
                          const imaging::RenderOptions& ropts, std::size_t threads = 1);

ImageCorpus load_corpus(const std::filesystem::path& corpus_dir);

struct LoadedImages {
    cnn::ImageSet<float> images;
    std::vector<int> loads;
};

// Decodes every PNG of a corpus into channel-planar floats in [0, 1].
LoadedImages load_corpus_images(const std::filesystem::path& corpus_dir, const ImageCorpus& corpus,
                                std::size_t threads = 1);

}  // namespace tfmd::pipeline
