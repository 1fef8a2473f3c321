#include "tfmd/pipeline/corpus.hpp"

#include "tfmd/common/blob_io.hpp"
#include "tfmd/common/error.hpp"
#include "tfmd/common/parallel.hpp"
#include "tfmd/imaging/png.hpp"

namespace tfmd::pipeline {

imaging::RenderOptions corpus_render_defaults() {
    imaging::RenderOptions o;
    o.floor_db = -60.0;
    o.max_freq_hz = 500.0;
    return o;
}

nlohmann::json to_json(const imaging::RenderOptions& o) {
    return {{"floor_db", o.floor_db},
            {"max_freq_hz", o.max_freq_hz ? nlohmann::json(*o.max_freq_hz) : nlohmann::json()},
            {"width", o.width},
            {"height", o.height}};
}

imaging::RenderOptions render_options_from_json(const nlohmann::json& j, imaging::RenderOptions o) {
    for (const auto& [key, value] : j.items()) {
        if (key == "floor_db") {
            o.floor_db = value.get<double>();
        } else if (key == "max_freq_hz") {
            o.max_freq_hz = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
        } else if (key == "width") {
            o.width = value.get<std::size_t>();
        } else if (key == "height") {
            o.height = value.get<std::size_t>();
        } else {
            throw InvalidArgument("unknown render option '" + key + "'");
        }
    }
    if (!(o.floor_db < 0.0)) throw InvalidArgument("floor_db must be negative");
    if (o.width < 1 || o.height < 1) throw InvalidArgument("image size must be positive");
    return o;
}

nlohmann::json to_json(const tfr::TransformConfig& c) {
    return {{"window", dsp::to_string(c.window)},       {"window_len", c.window_len},
            {"n_fft", c.n_fft},                         {"hop_nonoverlap", c.hop_nonoverlap},
            {"hop_overlap", c.hop_overlap},             {"threshold", c.threshold}};
}

tfr::TransformConfig transform_config_from_json(const nlohmann::json& j, tfr::TransformConfig c) {
    for (const auto& [key, value] : j.items()) {
        if (key == "window") {
            c.window = dsp::window_kind_from_string(value.get<std::string>());
        } else if (key == "window_len") {
            c.window_len = value.get<std::size_t>();
        } else if (key == "n_fft") {
            c.n_fft = value.get<std::size_t>();
        } else if (key == "hop_nonoverlap") {
            c.hop_nonoverlap = value.get<std::size_t>();
        } else if (key == "hop_overlap") {
            c.hop_overlap = value.get<std::size_t>();
        } else if (key == "threshold") {
            c.threshold = value.get<double>();
        } else {
            throw InvalidArgument("unknown transform option '" + key + "'");
        }
    }
    return c;
}

nlohmann::json to_json(const ImageCorpus& c) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : c.entries) {
        entries.push_back({{"path", e.path},
                           {"label", e.label},
                           {"class", motorsim::class_name(motorsim::class_from_index(e.label))},
                           {"load", e.load},
                           {"seed", e.seed}});
    }
    return {{"method", c.method}, {"entries", entries}, {"total", c.entries.size()}};
}

ImageCorpus image_corpus_from_json(const nlohmann::json& j) {
    ImageCorpus c;
    c.method = j.at("method").get<std::string>();
    for (const auto& e : j.at("entries")) {
        c.entries.push_back({e.at("path").get<std::string>(), e.at("label").get<int>(), e.at("load").get<int>(),
                             e.at("seed").get<std::uint64_t>()});
    }
    return c;
}

ImageCorpus render_corpus(const std::filesystem::path& dataset_dir, tfr::Method method,
                          const std::filesystem::path& out_dir, const tfr::TransformConfig& tcfg,
                          const imaging::RenderOptions& ropts, std::size_t threads) {
    const auto manifest = motorsim::load_manifest(dataset_dir);
    ImageCorpus corpus{tfr::method_code(method), {}};
    for (const auto& e : manifest.entries) {
        const std::string path = "all/" + motorsim::class_name(e.cls) + "/" + std::to_string(e.load) + "/" +
                                 std::to_string(e.seed) + ".png";
        corpus.entries.push_back({path, static_cast<int>(e.cls), e.load, e.seed});
    }
    parallel_for(manifest.entries.size(), threads, [&](std::size_t i) {
        const auto signal = dsp::read_time_series(dataset_dir / manifest.entries[i].path);
        imaging::write_png(out_dir / corpus.entries[i].path,
                           imaging::render_signal(signal.series, method, tcfg, ropts));
    });
    nlohmann::json j = to_json(corpus);
    j["transform"] = to_json(tcfg);
    j["render"] = to_json(ropts);
    write_json(out_dir / "manifest.json", j);
    return corpus;
}

ImageCorpus load_corpus(const std::filesystem::path& corpus_dir) {
    return image_corpus_from_json(read_json(corpus_dir / "manifest.json"));
}

LoadedImages load_corpus_images(const std::filesystem::path& corpus_dir, const ImageCorpus& corpus,
                                std::size_t threads) {
    if (corpus.entries.empty()) throw InvalidArgument("image corpus is empty");
    std::vector<std::vector<float>> pixels(corpus.entries.size());
    std::vector<std::size_t> heights(corpus.entries.size()), widths(corpus.entries.size());
    parallel_for(corpus.entries.size(), threads, [&](std::size_t i) {
        const auto img = imaging::read_png(corpus_dir / corpus.entries[i].path);
        heights[i] = static_cast<std::size_t>(img.height);
        widths[i] = static_cast<std::size_t>(img.width);
        pixels[i] = imaging::image_to_chw(img);
    });
    LoadedImages out;
    out.images = cnn::ImageSet<float>{3, heights[0], widths[0], {}, {}};
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        if (heights[i] != heights[0] || widths[i] != widths[0]) {
            throw ShapeMismatch(corpus.entries[i].path + ": image size differs from the rest of the corpus");
        }
        out.images.push_back(pixels[i], corpus.entries[i].label);
        out.loads.push_back(corpus.entries[i].load);
    }
    return out;
}

}  // namespace tfmd::pipeline
