#pragma once

#include "tfmd/imaging/render.hpp"
#include "tfmd/motorsim/dataset.hpp"
#include "tfmd/tfr/transform.hpp"

#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

namespace tfmd::motorsim {

struct PairSeparation {
    FaultClass a;
    FaultClass b;
    double ratio;  // ||mu_a - mu_b|| / (sigma_a + sigma_b)
    bool flagged;  // ratio < 1
};

/// sigma_c is the RMS Euclidean distance of class-c images from their mean
/// image, so a generator that emits class-independent images gives ratios
/// that shrink towards 0 as the sample count grows.
struct SeparabilityReport {
    std::string method;
    std::vector<PairSeparation> pairs;

    double min_ratio() const;
    bool all_separated() const;
};

nlohmann::json to_json(const SeparabilityReport& r);

/// Core computation over flattened images. Every class that appears needs at
/// least 10 samples.
SeparabilityReport separability_from_images(std::span<const int> labels, std::span<const std::vector<float>> images,
                                            const std::string& method);

/// Loads each manifest signal from dataset_root, renders it with `method`
/// and reports every class pair present.
SeparabilityReport class_separability_report(const DatasetManifest& manifest,
                                             const std::filesystem::path& dataset_root, tfr::Method method,
                                             const tfr::TransformConfig& tcfg = {},
                                             const imaging::RenderOptions& ropts = {});

}  // namespace tfmd::motorsim
