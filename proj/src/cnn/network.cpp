#include "tfmd/cnn/network.hpp"

#include "tfmd/common/error.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <random>

namespace tfmd::cnn {

namespace {

template <class T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class T>
using MapMat = Eigen::Map<RowMat<T>>;
template <class T>
using ConstMapMat = Eigen::Map<const RowMat<T>>;

// Stride-1, same-padding convolution lowered to one GEMM per sample via
// im2col; per-sample column blocks are (in_ch*k*k) x (h*w).
template <class T>
class Conv2D final : public Layer<T> {
public:
    Conv2D(std::size_t in_ch, std::size_t out_ch, std::size_t kernel, bool needs_input_grad)
        : in_ch_(in_ch), out_ch_(out_ch), k_(kernel), needs_input_grad_(needs_input_grad),
          weight_(out_ch * in_ch * kernel * kernel), bias_(out_ch), dweight_(weight_.size()), dbias_(out_ch) {}

    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override {
        if (in.size() != 3 || in[0] != in_ch_) {
            throw ShapeMismatch("conv2d expects " + std::to_string(in_ch_) + " input channels, got " + shape_string(in));
        }
        return {out_ch_, in[1], in[2]};
    }

    void forward(const Tensor<T>& in, Tensor<T>& out) override {
        batch_ = in.dim(0);
        h_ = in.dim(2);
        w_ = in.dim(3);
        const std::size_t hw = h_ * w_;
        const std::size_t kk = in_ch_ * k_ * k_;
        cols_.resize(kk * hw);
        out.shape = {batch_, out_ch_, h_, w_};
        out.data.resize(batch_ * out_ch_ * hw);
        const ConstMapMat<T> wmat(weight_.data(), out_ch_, kk);
        for (std::size_t b = 0; b < batch_; ++b) {
            im2col(in.data.data() + b * in_ch_ * hw, cols_.data());
            MapMat<T> y(out.data.data() + b * out_ch_ * hw, out_ch_, hw);
            y.noalias() = wmat * ConstMapMat<T>(cols_.data(), kk, hw);
            for (std::size_t co = 0; co < out_ch_; ++co) y.row(co).array() += bias_[co];
        }
    }

    // The column block is rebuilt per sample rather than kept from forward():
    // one block stays in cache, a whole batch of them does not.
    void backward(const Tensor<T>& in, const Tensor<T>&, const Tensor<T>& grad_out, Tensor<T>& grad_in) override {
        const std::size_t hw = h_ * w_;
        const std::size_t kk = in_ch_ * k_ * k_;
        MapMat<T> dw(dweight_.data(), out_ch_, kk);
        const ConstMapMat<T> wmat(weight_.data(), out_ch_, kk);
        grad_in.shape = {batch_, in_ch_, h_, w_};
        if (needs_input_grad_) {
            grad_in.data.assign(batch_ * in_ch_ * hw, T{});
            dcols_.resize(kk * hw);
        } else {
            grad_in.data.clear();
        }
        cols_.resize(kk * hw);
        for (std::size_t b = 0; b < batch_; ++b) {
            const ConstMapMat<T> g(grad_out.data.data() + b * out_ch_ * hw, out_ch_, hw);
            im2col(in.data.data() + b * in_ch_ * hw, cols_.data());
            dw.noalias() += g * ConstMapMat<T>(cols_.data(), kk, hw).transpose();
            for (std::size_t co = 0; co < out_ch_; ++co) {
                const T* row = grad_out.data.data() + (b * out_ch_ + co) * hw;
                T acc{0};
                for (std::size_t i = 0; i < hw; ++i) acc += row[i];
                dbias_[co] += acc;
            }
            if (needs_input_grad_) {
                MapMat<T>(dcols_.data(), kk, hw).noalias() = wmat.transpose() * g;
                col2im(dcols_.data(), grad_in.data.data() + b * in_ch_ * hw);
            }
        }
    }

    std::vector<ParamView<T>> parameters() override {
        return {{"conv.weight", weight_, dweight_, in_ch_ * k_ * k_}, {"conv.bias", bias_, dbias_, 0}};
    }

    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Conv2D>(*this); }

private:
    void im2col(const T* img, T* cols) const {
        const long pad = static_cast<long>(k_ / 2);
        const long h = static_cast<long>(h_), w = static_cast<long>(w_);
        for (std::size_t c = 0; c < in_ch_; ++c) {
            for (std::size_t ki = 0; ki < k_; ++ki) {
                for (std::size_t kj = 0; kj < k_; ++kj) {
                    T* row = cols + ((c * k_ + ki) * k_ + kj) * h_ * w_;
                    const long dy = static_cast<long>(ki) - pad;
                    const long dx = static_cast<long>(kj) - pad;
                    const long x_lo = std::max(0L, -dx);
                    const long x_hi = std::min(w, w - dx);
                    for (long y = 0; y < h; ++y) {
                        T* dst = row + y * w;
                        const long iy = y + dy;
                        if (iy < 0 || iy >= h) {
                            std::fill(dst, dst + w, T{});
                            continue;
                        }
                        const T* src = img + (static_cast<long>(c) * h + iy) * w + dx;
                        std::fill(dst, dst + x_lo, T{});
                        std::copy(src + x_lo, src + x_hi, dst + x_lo);
                        std::fill(dst + x_hi, dst + w, T{});
                    }
                }
            }
        }
    }

    void col2im(const T* cols, T* img) const {
        const long pad = static_cast<long>(k_ / 2);
        const long h = static_cast<long>(h_), w = static_cast<long>(w_);
        for (std::size_t c = 0; c < in_ch_; ++c) {
            for (std::size_t ki = 0; ki < k_; ++ki) {
                for (std::size_t kj = 0; kj < k_; ++kj) {
                    const T* row = cols + ((c * k_ + ki) * k_ + kj) * h_ * w_;
                    const long dy = static_cast<long>(ki) - pad;
                    const long dx = static_cast<long>(kj) - pad;
                    const long x_lo = std::max(0L, -dx);
                    const long x_hi = std::min(w, w - dx);
                    for (long y = 0; y < h; ++y) {
                        const long iy = y + dy;
                        if (iy < 0 || iy >= h) continue;
                        T* dst = img + (static_cast<long>(c) * h + iy) * w + dx;
                        const T* src = row + y * w;
                        for (long x = x_lo; x < x_hi; ++x) dst[x] += src[x];
                    }
                }
            }
        }
    }

    std::size_t in_ch_, out_ch_, k_;
    bool needs_input_grad_;
    AlignedVector<T> weight_, bias_, dweight_, dbias_;
    std::size_t batch_ = 0, h_ = 0, w_ = 0;
    AlignedVector<T> cols_, dcols_;
};

template <class T>
class ReLU final : public Layer<T> {
public:
    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override { return in; }

    void forward(const Tensor<T>& in, Tensor<T>& out) override {
        out.shape = in.shape;
        out.data.resize(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) out.data[i] = in.data[i] > T{0} ? in.data[i] : T{0};
    }

    void backward(const Tensor<T>&, const Tensor<T>& out, const Tensor<T>& grad_out, Tensor<T>& grad_in) override {
        grad_in.shape = grad_out.shape;
        grad_in.data.resize(grad_out.size());
        for (std::size_t i = 0; i < grad_out.size(); ++i) grad_in.data[i] = out.data[i] > T{0} ? grad_out.data[i] : T{0};
    }

    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<ReLU>(*this); }
};

template <class T>
class MaxPool2 final : public Layer<T> {
public:
    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override {
        if (in.size() != 3 || in[1] < 2 || in[2] < 2) throw ShapeMismatch("maxpool2 needs a CxHxW input of at least 2x2");
        return {in[0], in[1] / 2, in[2] / 2};
    }

    void forward(const Tensor<T>& in, Tensor<T>& out) override {
        const std::size_t b_n = in.dim(0), c_n = in.dim(1), h = in.dim(2), w = in.dim(3);
        const std::size_t oh = h / 2, ow = w / 2;
        out.shape = {b_n, c_n, oh, ow};
        out.data.resize(b_n * c_n * oh * ow);
        argmax_.resize(out.data.size());
        std::size_t o = 0;
        for (std::size_t bc = 0; bc < b_n * c_n; ++bc) {
            const std::size_t base = bc * h * w;
            for (std::size_t y = 0; y < oh; ++y) {
                for (std::size_t x = 0; x < ow; ++x, ++o) {
                    std::size_t best = base + (2 * y) * w + 2 * x;
                    for (std::size_t dy = 0; dy < 2; ++dy) {
                        for (std::size_t dx = 0; dx < 2; ++dx) {
                            const std::size_t idx = base + (2 * y + dy) * w + 2 * x + dx;
                            if (in.data[idx] > in.data[best]) best = idx;
                        }
                    }
                    argmax_[o] = best;
                    out.data[o] = in.data[best];
                }
            }
        }
    }

    void backward(const Tensor<T>& in, const Tensor<T>&, const Tensor<T>& grad_out, Tensor<T>& grad_in) override {
        grad_in.shape = in.shape;
        grad_in.data.assign(in.size(), T{});
        for (std::size_t o = 0; o < grad_out.size(); ++o) grad_in.data[argmax_[o]] += grad_out.data[o];
    }

    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<MaxPool2>(*this); }

private:
    std::vector<std::size_t> argmax_;
};

template <class T>
class Flatten final : public Layer<T> {
public:
    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override {
        return {Tensor<T>::element_count(in)};
    }

    void forward(const Tensor<T>& in, Tensor<T>& out) override {
        out.shape = {in.dim(0), in.size() / in.dim(0)};
        out.data = in.data;
    }

    void backward(const Tensor<T>& in, const Tensor<T>&, const Tensor<T>& grad_out, Tensor<T>& grad_in) override {
        grad_in.shape = in.shape;
        grad_in.data = grad_out.data;
    }

    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Flatten>(*this); }
};

template <class T>
class Dense final : public Layer<T> {
public:
    Dense(std::size_t n_in, std::size_t n_out)
        : n_in_(n_in), n_out_(n_out), weight_(n_in * n_out), bias_(n_out), dweight_(weight_.size()), dbias_(n_out) {}

    std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const override {
        if (in.size() != 1 || in[0] != n_in_) {
            throw ShapeMismatch("dense expects " + std::to_string(n_in_) + " inputs, got " + shape_string(in));
        }
        return {n_out_};
    }

    void forward(const Tensor<T>& in, Tensor<T>& out) override {
        const std::size_t b = in.dim(0);
        out.shape = {b, n_out_};
        out.data.resize(b * n_out_);
        MapMat<T> y(out.data.data(), b, n_out_);
        y.noalias() = ConstMapMat<T>(in.data.data(), b, n_in_) * ConstMapMat<T>(weight_.data(), n_out_, n_in_).transpose();
        for (std::size_t r = 0; r < b; ++r) {
            for (std::size_t j = 0; j < n_out_; ++j) y(r, j) += bias_[j];
        }
    }

    void backward(const Tensor<T>& in, const Tensor<T>&, const Tensor<T>& grad_out, Tensor<T>& grad_in) override {
        const std::size_t b = grad_out.dim(0);
        const ConstMapMat<T> g(grad_out.data.data(), b, n_out_);
        MapMat<T>(dweight_.data(), n_out_, n_in_).noalias() += g.transpose() * ConstMapMat<T>(in.data.data(), b, n_in_);
        for (std::size_t r = 0; r < b; ++r) {
            for (std::size_t j = 0; j < n_out_; ++j) dbias_[j] += grad_out.data[r * n_out_ + j];
        }
        grad_in.shape = in.shape;
        grad_in.data.resize(b * n_in_);
        MapMat<T>(grad_in.data.data(), b, n_in_).noalias() = g * ConstMapMat<T>(weight_.data(), n_out_, n_in_);
    }

    std::vector<ParamView<T>> parameters() override {
        return {{"dense.weight", weight_, dweight_, n_in_}, {"dense.bias", bias_, dbias_, 0}};
    }

    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Dense>(*this); }

private:
    std::size_t n_in_, n_out_;
    AlignedVector<T> weight_, bias_, dweight_, dbias_;
};

}  // namespace

template <class T>
Network<T>::Network(Architecture arch) : arch_(std::move(arch)) {
    if (arch_.in_channels < 1 || arch_.in_height < 1 || arch_.in_width < 1 || arch_.num_classes < 2) {
        throw ShapeMismatch("architecture needs a positive input shape and at least two classes");
    }
    if (arch_.layers.empty() || arch_.layers.back().kind != LayerKind::Softmax) {
        throw ShapeMismatch("architecture must end with a softmax layer");
    }
    std::vector<std::size_t> shape{static_cast<std::size_t>(arch_.in_channels),
                                   static_cast<std::size_t>(arch_.in_height),
                                   static_cast<std::size_t>(arch_.in_width)};
    bool first_trainable = true;
    for (std::size_t i = 0; i + 1 < arch_.layers.size(); ++i) {
        const auto& spec = arch_.layers[i];
        std::unique_ptr<Layer<T>> layer;
        switch (spec.kind) {
            case LayerKind::Conv2D:
                if (spec.kernel < 1 || spec.kernel % 2 == 0 || spec.out_channels < 1) {
                    throw ShapeMismatch("conv2d needs an odd kernel and positive channel count");
                }
                if (shape.size() != 3) throw ShapeMismatch("conv2d needs a CxHxW input, got " + shape_string(shape));
                layer = std::make_unique<Conv2D<T>>(shape[0], spec.out_channels, spec.kernel, !first_trainable);
                first_trainable = false;
                break;
            case LayerKind::Dense:
                if (spec.units < 1) throw ShapeMismatch("dense needs a positive unit count");
                if (shape.size() != 1) throw ShapeMismatch("dense needs a flat input, got " + shape_string(shape));
                layer = std::make_unique<Dense<T>>(shape[0], spec.units);
                first_trainable = false;
                break;
            case LayerKind::ReLU: layer = std::make_unique<ReLU<T>>(); break;
            case LayerKind::MaxPool: layer = std::make_unique<MaxPool2<T>>(); break;
            case LayerKind::Flatten: layer = std::make_unique<Flatten<T>>(); break;
            case LayerKind::Softmax: throw ShapeMismatch("softmax may only appear as the last layer");
        }
        shape = layer->output_shape(shape);
        layers_.push_back(std::move(layer));
    }
    if (shape.size() != 1 || shape[0] != static_cast<std::size_t>(arch_.num_classes)) {
        throw ShapeMismatch("network output " + shape_string(shape) + " does not match " +
                            std::to_string(arch_.num_classes) + " classes");
    }
    activations_.resize(layers_.size() + 1);
}

template <class T>
Network<T>::Network(const Network& other) : arch_(other.arch_), activations_(other.activations_.size()) {
    for (const auto& l : other.layers_) layers_.push_back(l->clone());
}

template <class T>
Network<T>& Network<T>::operator=(const Network& other) {
    if (this != &other) {
        Network copy(other);
        *this = std::move(copy);
    }
    return *this;
}

template <class T>
void Network<T>::initialize(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (auto& p : parameters()) {
        if (p.fan_in == 0) {
            std::fill(p.value.begin(), p.value.end(), T{0});
            continue;
        }
        const double limit = std::sqrt(6.0 / static_cast<double>(p.fan_in));
        std::uniform_real_distribution<double> dist(-limit, limit);
        for (auto& v : p.value) v = static_cast<T>(dist(rng));
    }
    zero_grad();
}

template <class T>
Tensor<T> Network<T>::forward(const Tensor<T>& batch) {
    const std::vector<std::size_t> expected{static_cast<std::size_t>(arch_.in_channels),
                                            static_cast<std::size_t>(arch_.in_height),
                                            static_cast<std::size_t>(arch_.in_width)};
    if (batch.shape.size() != 4 || batch.shape[0] == 0 ||
        !std::equal(expected.begin(), expected.end(), batch.shape.begin() + 1)) {
        throw ShapeMismatch("network expects Bx" + shape_string(expected) + " input, got " + shape_string(batch.shape));
    }
    require_finite(batch, "network input");
    activations_[0] = batch;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        layers_[i]->forward(activations_[i], activations_[i + 1]);
        require_finite(activations_[i + 1], "layer " + std::to_string(i) + " output");
    }
    return activations_.back();
}

template <class T>
void Network<T>::backward(const Tensor<T>& grad_logits) {
    gradients_.resize(layers_.size() + 1);
    gradients_.back() = grad_logits;
    for (std::size_t i = layers_.size(); i-- > 0;) layers_[i]->backward(activations_[i], activations_[i + 1], gradients_[i + 1], gradients_[i]);
}

template <class T>
void Network<T>::zero_grad() {
    for (auto& p : parameters()) std::fill(p.grad.begin(), p.grad.end(), T{0});
}

template <class T>
std::vector<ParamView<T>> Network<T>::parameters() {
    std::vector<ParamView<T>> out;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        for (auto& p : layers_[i]->parameters()) {
            p.name = "layer" + std::to_string(i) + "." + p.name;
            out.push_back(std::move(p));
        }
    }
    return out;
}

template <class T>
std::size_t Network<T>::parameter_count() {
    std::size_t n = 0;
    for (const auto& p : parameters()) n += p.value.size();
    return n;
}

template <class T>
std::vector<T> Network<T>::flat_parameters() {
    std::vector<T> out;
    for (const auto& p : parameters()) out.insert(out.end(), p.value.begin(), p.value.end());
    return out;
}

template <class T>
void Network<T>::set_flat_parameters(std::span<const T> values) {
    if (values.size() != parameter_count()) throw ShapeMismatch("parameter vector has the wrong length");
    std::size_t offset = 0;
    for (auto& p : parameters()) {
        std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(offset), p.value.size(), p.value.begin());
        offset += p.value.size();
    }
}

template class Network<float>;
template class Network<double>;

}  // namespace tfmd::cnn
