#pragma once

#include "tfmd/cnn/architecture.hpp"
#include "tfmd/cnn/tensor.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace tfmd::cnn {

template <class T>
struct ParamView {
    std::string name;
    std::span<T> value;
    std::span<T> grad;
    std::size_t fan_in;  // 0 for biases
};

template <class T>
class Layer {
public:
    virtual ~Layer() = default;
    // Input shape excludes the batch dimension.
    virtual std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in) const = 0;
    virtual void forward(const Tensor<T>& in, Tensor<T>& out) = 0;
    // Accumulates parameter gradients and writes dL/d(input) into grad_in.
    // `in` and `out` are the tensors of the preceding forward() call.
    virtual void backward(const Tensor<T>& in, const Tensor<T>& out, const Tensor<T>& grad_out,
                          Tensor<T>& grad_in) = 0;
    virtual std::vector<ParamView<T>> parameters() { return {}; }
    virtual std::unique_ptr<Layer<T>> clone() const = 0;
};

/// Sequential network. Construction audits the full shape chain
/// (input -> num_classes) and throws ShapeMismatch on any inconsistency.
/// The trailing Softmax layer is applied by the loss and by predict();
/// forward() returns logits.
template <class T>
class Network {
public:
    explicit Network(Architecture arch);
    Network(const Network& other);
    Network& operator=(const Network& other);
    Network(Network&&) noexcept = default;
    Network& operator=(Network&&) noexcept = default;

    const Architecture& architecture() const noexcept { return arch_; }

    // He-style fan-in uniform weights U(-sqrt(6/fan_in), sqrt(6/fan_in)),
    // zero biases, drawn from a seeded generator.
    void initialize(std::uint64_t seed);

    // batch: B x C x H x W -> logits B x num_classes. Every intermediate
    // activation is checked for finiteness.
    Tensor<T> forward(const Tensor<T>& batch);
    // Backpropagates dL/d(logits) through the activations of the last forward().
    void backward(const Tensor<T>& grad_logits);

    void zero_grad();
    std::vector<ParamView<T>> parameters();
    std::size_t parameter_count();

    // Flat copy of every parameter in parameters() order.
    std::vector<T> flat_parameters();
    void set_flat_parameters(std::span<const T> values);

private:
    Architecture arch_;
    std::vector<std::unique_ptr<Layer<T>>> layers_;
    std::vector<Tensor<T>> activations_;
    std::vector<Tensor<T>> gradients_;  // kept between calls so buffers are reused
};

extern template class Network<float>;
extern template class Network<double>;

}  // namespace tfmd::cnn
