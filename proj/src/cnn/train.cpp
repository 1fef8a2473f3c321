#include "tfmd/cnn/train.hpp"

#include "tfmd/common/blob_io.hpp"
#include "tfmd/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>

namespace tfmd::cnn {

template <class T>
void ImageSet<T>::push_back(std::span<const T> image, int label) {
    if (image.size() != sample_size()) throw ShapeMismatch("image size does not match the set's sample shape");
    data.insert(data.end(), image.begin(), image.end());
    labels.push_back(label);
}

template <class T>
ImageSet<T> ImageSet<T>::subset(std::span<const std::size_t> indices) const {
    ImageSet out{channels, height, width, {}, {}};
    out.data.reserve(indices.size() * sample_size());
    for (const auto i : indices) {
        if (i >= size()) throw InvalidArgument("subset index out of range");
        const auto first = data.begin() + static_cast<std::ptrdiff_t>(i * sample_size());
        out.data.insert(out.data.end(), first, first + static_cast<std::ptrdiff_t>(sample_size()));
        out.labels.push_back(labels[i]);
    }
    return out;
}

template <class T>
Tensor<T> ImageSet<T>::batch(std::span<const std::size_t> indices) const {
    Tensor<T> t({indices.size(), channels, height, width});
    const std::size_t s = sample_size();
    for (std::size_t b = 0; b < indices.size(); ++b) {
        if (indices[b] >= size()) throw InvalidArgument("batch index out of range");
        std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(indices[b] * s), s,
                    t.data.begin() + static_cast<std::ptrdiff_t>(b * s));
    }
    return t;
}

namespace {

// Forward/backward run over chunks of this many samples so activations stay in cache.
constexpr std::size_t kMicroBatch = 4;

void check_labels(std::span<const int> labels, std::size_t batch, std::size_t classes) {
    if (labels.size() != batch) throw ShapeMismatch("label count does not match batch size");
    for (const int l : labels) {
        if (l < 0 || static_cast<std::size_t>(l) >= classes) {
            throw InvalidArgument("label " + std::to_string(l) + " outside 0.." + std::to_string(classes - 1));
        }
    }
}

template <class T>
std::size_t argmax_row(const T* row, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j) {
        if (row[j] > row[best]) best = j;
    }
    return best;
}

}  // namespace

template <class T>
Tensor<T> softmax(const Tensor<T>& logits) {
    if (logits.shape.size() != 2) throw ShapeMismatch("softmax expects B x C logits");
    const std::size_t b_n = logits.dim(0), c_n = logits.dim(1);
    Tensor<T> out(logits.shape);
    for (std::size_t b = 0; b < b_n; ++b) {
        const T* z = logits.data.data() + b * c_n;
        const T zmax = *std::max_element(z, z + c_n);
        double sum = 0.0;
        for (std::size_t j = 0; j < c_n; ++j) sum += std::exp(static_cast<double>(z[j] - zmax));
        for (std::size_t j = 0; j < c_n; ++j) {
            out.data[b * c_n + j] = static_cast<T>(std::exp(static_cast<double>(z[j] - zmax)) / sum);
        }
    }
    return out;
}

template <class T>
double cross_entropy(const Tensor<T>& logits, std::span<const int> labels) {
    const Tensor<T> p = softmax(logits);
    const std::size_t b_n = logits.dim(0), c_n = logits.dim(1);
    check_labels(labels, b_n, c_n);
    double loss = 0.0;
    for (std::size_t b = 0; b < b_n; ++b) {
        loss -= std::log(std::max(static_cast<double>(p.data[b * c_n + static_cast<std::size_t>(labels[b])]), 1e-12));
    }
    return loss / static_cast<double>(b_n);
}

template <class T>
LossResult loss_and_grad(Network<T>& net, const Tensor<T>& batch, std::span<const int> labels) {
    if (batch.shape.size() != 4) throw ShapeMismatch("loss_and_grad expects a BxCxHxW batch");
    const std::size_t b_n = batch.dim(0);
    if (labels.size() != b_n) throw ShapeMismatch("label count does not match batch size");
    const std::size_t sample = b_n ? batch.size() / b_n : 0;
    const std::size_t chunk_n = kMicroBatch;

    // Forward and backward run over small chunks so activations stay in
    // cache; parameter gradients accumulate across chunks.
    net.zero_grad();
    LossResult r{0.0, 0};
    Tensor<T> chunk;
    for (std::size_t start = 0; start < b_n; start += chunk_n) {
        const std::size_t n = std::min(chunk_n, b_n - start);
        chunk.shape = {n, batch.dim(1), batch.dim(2), batch.dim(3)};
        chunk.data.assign(batch.data.begin() + static_cast<std::ptrdiff_t>(start * sample),
                          batch.data.begin() + static_cast<std::ptrdiff_t>((start + n) * sample));
        Tensor<T> logits;
        try {
            logits = net.forward(chunk);
        } catch (const NonFinite& e) {
            throw DivergedTraining(e.what());
        }
        const std::size_t c_n = logits.dim(1);
        const auto chunk_labels = labels.subspan(start, n);
        check_labels(chunk_labels, n, c_n);
        Tensor<T> grad = softmax(logits);
        for (std::size_t b = 0; b < n; ++b) {
            T* row = grad.data.data() + b * c_n;
            const auto y = static_cast<std::size_t>(chunk_labels[b]);
            if (argmax_row(logits.data.data() + b * c_n, c_n) == y) ++r.correct;
            r.loss -= std::log(std::max(static_cast<double>(row[y]), 1e-12));
            row[y] -= T{1};
            for (std::size_t j = 0; j < c_n; ++j) row[j] /= static_cast<T>(b_n);
        }
        if (!std::isfinite(r.loss)) throw DivergedTraining("non-finite loss");
        net.backward(grad);
    }
    r.loss /= static_cast<double>(b_n);
    return r;
}

void TrainConfig::validate() const {
    // lr = 0 is accepted and freezes the parameters.
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw InvalidArgument("learning_rate must be >= 0");
    if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
    if (optimizer == Optimizer::Adam) {
        if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
            throw InvalidArgument("Adam betas must be in [0, 1)");
        }
        if (!(epsilon > 0.0)) throw InvalidArgument("Adam epsilon must be > 0");
    }
}

std::string TrainingHistory::to_csv() const {
    std::string out = "epoch,train_loss,train_acc,val_loss,val_acc\n";
    char buf[160];
    for (const auto& e : epochs) {
        std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.9g,%.9g\n", e.epoch, e.train_loss, e.train_acc, e.val_loss,
                      e.val_acc);
        out += buf;
    }
    return out;
}

namespace {

template <class T>
void dump_state(const std::filesystem::path& path, const std::vector<T>& params, const TrainConfig& cfg,
                std::size_t epoch, const Architecture& arch) {
    std::vector<float> payload(params.begin(), params.end());
    nlohmann::json header{{"format", "tfmd-divergence-dump"},
                          {"architecture", to_json(arch)},
                          {"seed", cfg.seed},
                          {"epoch", epoch}};
    write_header_blob(path, std::move(header), payload);
}

}  // namespace

template <class T>
TrainingHistory train(Network<T>& net, const ImageSet<T>& data, const TrainConfig& cfg,
                      const ImageSet<T>* validation) {
    cfg.validate();
    if (data.size() == 0) throw InvalidArgument("training set is empty");

    auto params = net.parameters();
    std::vector<std::vector<T>> m1, m2;
    for (const auto& p : params) {
        m1.emplace_back(p.value.size(), T{0});
        m2.emplace_back(p.value.size(), T{0});
    }

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t step = 0;
    TrainingHistory history;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0.0;
        std::size_t correct = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t n = std::min(cfg.batch_size, order.size() - start);
            const std::span<const std::size_t> idx(order.data() + start, n);
            std::vector<int> labels(n);
            for (std::size_t i = 0; i < n; ++i) labels[i] = data.labels[idx[i]];

            LossResult r;
            try {
                r = loss_and_grad(net, data.batch(idx), labels);
            } catch (const DivergedTraining& e) {
                if (cfg.divergence_dump) dump_state(*cfg.divergence_dump, net.flat_parameters(), cfg, epoch, net.architecture());
                throw DivergedTraining(std::string("epoch ") + std::to_string(epoch) + ": " + e.what());
            }
            loss_sum += r.loss * static_cast<double>(n);
            correct += r.correct;

            ++step;
            if (cfg.optimizer == Optimizer::SGD) {
                const T lr = static_cast<T>(cfg.learning_rate);
                for (auto& p : params) {
                    for (std::size_t i = 0; i < p.value.size(); ++i) p.value[i] -= lr * p.grad[i];
                }
            } else {
                const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
                const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
                const T b1 = static_cast<T>(cfg.beta1), b2 = static_cast<T>(cfg.beta2);
                const T step_size = static_cast<T>(cfg.learning_rate / bc1);
                const T inv_sqrt_bc2 = static_cast<T>(1.0 / std::sqrt(bc2));
                const T eps = static_cast<T>(cfg.epsilon);
                for (std::size_t k = 0; k < params.size(); ++k) {
                    auto& p = params[k];
                    T* m = m1[k].data();
                    T* v = m2[k].data();
                    for (std::size_t i = 0; i < p.value.size(); ++i) {
                        const T g = p.grad[i];
                        m[i] = b1 * m[i] + (T{1} - b1) * g;
                        v[i] = b2 * v[i] + (T{1} - b2) * g * g;
                        p.value[i] -= step_size * m[i] / (std::sqrt(v[i]) * inv_sqrt_bc2 + eps);
                    }
                }
            }
        }

        EpochStats s{epoch, loss_sum / static_cast<double>(data.size()),
                     static_cast<double>(correct) / static_cast<double>(data.size()),
                     std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
        if (validation && validation->size() > 0) {
            const LossResult v = evaluate(net, *validation);
            s.val_loss = v.loss;
            s.val_acc = static_cast<double>(v.correct) / static_cast<double>(validation->size());
        }
        history.epochs.push_back(s);
    }
    return history;
}

template <class T>
Prediction<T> predict(Network<T>& net, const ImageSet<T>& images, std::size_t batch_size) {
    if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
    const auto classes = static_cast<std::size_t>(net.architecture().num_classes);
    Prediction<T> out;
    out.probabilities = Tensor<T>({images.size(), classes});
    std::vector<std::size_t> idx;
    for (std::size_t start = 0; start < images.size(); start += batch_size) {
        const std::size_t n = std::min(batch_size, images.size() - start);
        idx.resize(n);
        std::iota(idx.begin(), idx.end(), start);
        const Tensor<T> p = softmax(net.forward(images.batch(idx)));
        std::copy(p.data.begin(), p.data.end(), out.probabilities.data.begin() + static_cast<std::ptrdiff_t>(start * classes));
        for (std::size_t b = 0; b < n; ++b) {
            out.labels.push_back(static_cast<int>(argmax_row(p.data.data() + b * classes, classes)));
        }
    }
    return out;
}

template <class T>
LossResult evaluate(Network<T>& net, const ImageSet<T>& images, std::size_t batch_size) {
    if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
    LossResult total{0.0, 0};
    std::vector<std::size_t> idx;
    for (std::size_t start = 0; start < images.size(); start += batch_size) {
        const std::size_t n = std::min(batch_size, images.size() - start);
        idx.resize(n);
        std::iota(idx.begin(), idx.end(), start);
        const Tensor<T> logits = net.forward(images.batch(idx));
        const std::span<const int> labels(images.labels.data() + start, n);
        total.loss += cross_entropy(logits, labels) * static_cast<double>(n);
        for (std::size_t b = 0; b < n; ++b) {
            if (static_cast<int>(argmax_row(logits.data.data() + b * logits.dim(1), logits.dim(1))) == labels[b]) {
                ++total.correct;
            }
        }
    }
    if (images.size() > 0) total.loss /= static_cast<double>(images.size());
    return total;
}

template struct ImageSet<float>;
template struct ImageSet<double>;

#define TFMD_INSTANTIATE(T)                                                                                  \
    template Tensor<T> softmax(const Tensor<T>&);                                                            \
    template double cross_entropy(const Tensor<T>&, std::span<const int>);                                   \
    template LossResult loss_and_grad(Network<T>&, const Tensor<T>&, std::span<const int>);                  \
    template TrainingHistory train(Network<T>&, const ImageSet<T>&, const TrainConfig&, const ImageSet<T>*); \
    template Prediction<T> predict(Network<T>&, const ImageSet<T>&, std::size_t);                            \
    template LossResult evaluate(Network<T>&, const ImageSet<T>&, std::size_t);

TFMD_INSTANTIATE(float)
TFMD_INSTANTIATE(double)

#undef TFMD_INSTANTIATE

}  // namespace tfmd::cnn
