#pragma once

#include "tfmd/cnn/checkpoint.hpp"
#include "tfmd/cnn/train.hpp"
#include "tfmd/pipeline/folds.hpp"
#include "tfmd/pipeline/report.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>

namespace tfmd::pipeline {

struct FoldInput {
    std::size_t fold;
    std::uint64_t seed;                     // master seed XOR fold index
    const cnn::ImageSet<float>& train;      // the only data parameter updates may use
    const cnn::ImageSet<float>& test;       // held out; for monitoring and prediction
};

struct FoldOutput {
    std::vector<int> predictions;  // one per test sample
    std::optional<cnn::TrainingHistory> history;
    std::optional<cnn::Network<float>> model;
};

using FoldTrainer = std::function<FoldOutput(const FoldInput&)>;

/// Default trainer: fresh compact CNN initialized from the fold seed,
/// trained on the training fold with `cfg` (shuffle seed = fold seed), the
/// test fold evaluated each epoch for the history only.
FoldTrainer cnn_fold_trainer(cnn::TrainConfig cfg, cnn::Architecture arch = cnn::Architecture::compact_default());

struct CvOptions {
    std::size_t k = 10;
    std::uint64_t seed = 0;
    std::size_t threads = 1;  // folds run in parallel; each fold is self-contained
    // When set, receives history_fold<i>.csv, checkpoints/fold<i>.ckpt and
    // confusion.csv.
    std::optional<std::filesystem::path> artifacts_dir;
};

/// Trains one model per fold of a class-stratified plan and pools the
/// predictions. A fold whose trainer throws is recorded as failed and the
/// run continues. `loads` (optional, one per sample) feeds the per-fold load
/// balance audit.
EvalReport cross_validate(const cnn::ImageSet<float>& data, std::span<const int> loads, const std::string& method,
                          const FoldTrainer& trainer, const CvOptions& opts);

}  // namespace tfmd::pipeline
