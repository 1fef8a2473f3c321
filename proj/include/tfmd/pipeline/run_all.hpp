#pragma once

#include "tfmd/cnn/train.hpp"
#include "tfmd/imaging/render.hpp"
#include "tfmd/motorsim/motor_spec.hpp"
#include "tfmd/pipeline/report.hpp"
#include "tfmd/tfr/transform.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace tfmd::pipeline {

struct RunConfig {
    motorsim::MotorSpec motor;
    std::size_t per_cell = 20;
    std::uint64_t seed = 1;  // master seed: dataset, folds and per-fold training
    std::vector<tfr::Method> methods{tfr::kAllMethods.begin(), tfr::kAllMethods.end()};
    std::size_t k = 10;
    cnn::TrainConfig train;
    tfr::TransformConfig transform;
    imaging::RenderOptions render;  // corpus_render_defaults() unless overridden
    std::size_t threads = 0;        // 0: thread_budget()

    RunConfig();
};

nlohmann::json to_json(const RunConfig& c);
// Missing keys keep their defaults; unknown keys are rejected.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

struct RunSummary {
    std::vector<EvalReport> reports;      // methods that completed, config order
    std::vector<std::string> failed;      // "<method>: <reason>"
};

/// Layout under out_dir:
///   run_config.json
///   dataset/{spec.json, manifest.json, signals/...}
///   images/<method>/{manifest.json, all/<class>/<load>/<seed>.png}
///   reports/<method>/{eval_report.json, confusion.csv, history_fold<i>.csv, checkpoints/fold<i>.ckpt}
///   comparison.{json,csv,txt}, boxplot.csv, separability.json, run_log.txt
/// A failing method is logged and skipped; the others still run. Dataset
/// generation failure aborts the run.
RunSummary run_all(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace tfmd::pipeline
