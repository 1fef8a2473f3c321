#include "tfmd/motorsim/dataset.hpp"

#include "tfmd/common/blob_io.hpp"
#include "tfmd/common/error.hpp"
#include "tfmd/common/parallel.hpp"
#include "tfmd/motorsim/synth.hpp"

namespace tfmd::motorsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

std::array<std::size_t, kNumClasses> DatasetManifest::counts_per_class() const {
    std::array<std::size_t, kNumClasses> counts{};
    for (const auto& e : entries) ++counts[static_cast<int>(e.cls)];
    return counts;
}

DatasetManifest DatasetManifest::filter_load(int load_pct) const {
    DatasetManifest out;
    for (const auto& e : entries) {
        if (e.load == load_pct) out.entries.push_back(e);
    }
    return out;
}

nlohmann::json to_json(const DatasetManifest& m) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : m.entries) {
        entries.push_back({{"class", class_name(e.cls)},
                           {"label", static_cast<int>(e.cls)},
                           {"load", e.load},
                           {"index", e.index},
                           {"seed", e.seed},
                           {"path", e.path}});
    }
    const auto counts = m.counts_per_class();
    nlohmann::json per_class = nlohmann::json::object();
    for (FaultClass c : kAllClasses) per_class[class_name(c)] = counts[static_cast<int>(c)];
    return {{"entries", entries}, {"counts_per_class", per_class}, {"total", m.entries.size()}};
}

DatasetManifest manifest_from_json(const nlohmann::json& j) {
    DatasetManifest m;
    for (const auto& e : j.at("entries")) {
        ManifestEntry entry{class_from_index(e.at("label").get<int>()), e.at("load").get<int>(),
                            e.at("index").get<std::size_t>(), e.at("seed").get<std::uint64_t>(),
                            e.at("path").get<std::string>()};
        require_valid_load(entry.load);
        m.entries.push_back(std::move(entry));
    }
    return m;
}

std::uint64_t derive_seed(std::uint64_t base_seed, FaultClass cls, int load_pct, std::size_t index) {
    const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<int>(cls)) << 56) ^
                              (static_cast<std::uint64_t>(load_pct) << 48) ^ static_cast<std::uint64_t>(index);
    return base_seed ^ splitmix64(key);
}

DatasetManifest generate_dataset(const MotorSpec& spec, std::size_t per_cell, std::uint64_t base_seed,
                                 const std::filesystem::path& out_dir, std::size_t threads) {
    if (per_cell < 1) throw InvalidArgument("per_cell must be at least 1");
    spec.validate();

    DatasetManifest manifest;
    for (FaultClass c : kAllClasses) {
        for (int load : kLoadLevels) {
            for (std::size_t i = 0; i < per_cell; ++i) {
                const std::string path =
                    "signals/" + class_name(c) + "/" + std::to_string(load) + "/" + std::to_string(i);
                manifest.entries.push_back({c, load, i, derive_seed(base_seed, c, load, i), path});
            }
        }
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
    write_json(out_dir / "spec.json", to_json(spec));

    parallel_for(manifest.entries.size(), threads, [&](std::size_t i) {
        const auto& e = manifest.entries[i];
        const auto ts = synth_signal(e.cls, e.load, spec, e.seed);
        dsp::write_time_series(out_dir / e.path, ts, {class_name(e.cls), e.load, e.seed});
    });

    write_json(out_dir / "manifest.json", to_json(manifest));
    return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& dataset_dir) {
    return manifest_from_json(read_json(dataset_dir / "manifest.json"));
}

}  // namespace tfmd::motorsim
