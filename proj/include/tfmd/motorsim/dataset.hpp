#pragma once

#include "tfmd/motorsim/motor_spec.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace tfmd::motorsim {

struct ManifestEntry {
    FaultClass cls;
    int load;
    std::size_t index;  // position within its (class, load) cell
    std::uint64_t seed;
    std::string path;   // signal stem, relative to the dataset root

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    std::array<std::size_t, kNumClasses> counts_per_class() const;
    DatasetManifest filter_load(int load_pct) const;

    friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

nlohmann::json to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const nlohmann::json& j);

/// base_seed mixed with a hash of (class, load, index); each cell's seeds are
/// independent of every other cell and of generation order.
std::uint64_t derive_seed(std::uint64_t base_seed, FaultClass cls, int load_pct, std::size_t index);

/// Writes per_cell signals for every (class, load) cell under
/// out_dir/signals/<class>/<load>/<index>.{f32,json}, plus out_dir/spec.json
/// and out_dir/manifest.json. Generation runs on up to `threads` workers.
DatasetManifest generate_dataset(const MotorSpec& spec, std::size_t per_cell, std::uint64_t base_seed,
                                 const std::filesystem::path& out_dir, std::size_t threads = 1);

DatasetManifest load_manifest(const std::filesystem::path& dataset_dir);

}  // namespace tfmd::motorsim
