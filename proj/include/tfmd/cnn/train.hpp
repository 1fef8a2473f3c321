#pragma once

#include "tfmd/cnn/network.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tfmd::cnn {

/// Labeled images stored channel-planar, one sample after another.
template <class T>
struct ImageSet {
    std::size_t channels = 0;
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<T> data;
    std::vector<int> labels;

    std::size_t sample_size() const noexcept { return channels * height * width; }
    std::size_t size() const noexcept { return labels.size(); }

    void push_back(std::span<const T> image, int label);
    ImageSet subset(std::span<const std::size_t> indices) const;
    Tensor<T> batch(std::span<const std::size_t> indices) const;
};

struct LossResult {
    double loss;
    std::size_t correct;  // argmax hits in the batch
};

/// Mean softmax cross-entropy over the batch (softmax with max subtraction,
/// log clamped at 1e-12). Leaves the gradients of every parameter in the
/// network's grad buffers. Throws DivergedTraining on a non-finite loss.
template <class T>
LossResult loss_and_grad(Network<T>& net, const Tensor<T>& batch, std::span<const int> labels);

// Row-wise softmax with max subtraction.
template <class T>
Tensor<T> softmax(const Tensor<T>& logits);

// Cross-entropy of already-computed logits (no gradient).
template <class T>
double cross_entropy(const Tensor<T>& logits, std::span<const int> labels);

enum class Optimizer { SGD, Adam };

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t batch_size = 32;
    std::size_t epochs = 30;
    std::uint64_t seed = 0;
    Optimizer optimizer = Optimizer::Adam;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    // When set, a checkpoint of the last good parameters is written here if
    // training diverges.
    std::optional<std::filesystem::path> divergence_dump;

    void validate() const;
};

struct EpochStats {
    std::size_t epoch;
    double train_loss;
    double train_acc;
    double val_loss;  // NaN without a validation set
    double val_acc;
};

struct TrainingHistory {
    std::vector<EpochStats> epochs;

    std::string to_csv() const;
    friend bool operator==(const TrainingHistory& a, const TrainingHistory& b) { return a.to_csv() == b.to_csv(); }
};

/// Mini-batch training with a fixed per-epoch shuffle drawn from cfg.seed.
/// The network is expected to be initialized already. train_loss/train_acc
/// are averaged over the mini-batches seen during the epoch; the optional
/// validation set is only ever evaluated, never trained on.
template <class T>
TrainingHistory train(Network<T>& net, const ImageSet<T>& data, const TrainConfig& cfg,
                      const ImageSet<T>* validation = nullptr);

template <class T>
struct Prediction {
    std::vector<int> labels;
    Tensor<T> probabilities;  // N x num_classes
};

/// argmax of the softmax (lowest index wins ties), evaluated in chunks of
/// `batch_size` samples.
template <class T>
Prediction<T> predict(Network<T>& net, const ImageSet<T>& images, std::size_t batch_size = 64);

// Loss and accuracy over a whole set without touching gradients.
template <class T>
LossResult evaluate(Network<T>& net, const ImageSet<T>& images, std::size_t batch_size = 64);

}  // namespace tfmd::cnn
