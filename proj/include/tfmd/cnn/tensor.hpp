#pragma once

#include <cstddef>
#include <new>
#include <numeric>
#include <string>
#include <vector>

namespace tfmd::cnn {

// 64-byte aligned storage. Vectorized kernels peel to the SIMD boundary, so
// without a fixed alignment the summation order, and hence the low bits,
// would depend on where the heap placed each buffer.
template <class T>
struct AlignedAllocator {
    using value_type = T;
    static constexpr std::align_val_t kAlign{64};

    AlignedAllocator() noexcept = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), kAlign)); }
    void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlign); }

    template <class U>
    bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

template <class T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

/// Row-major dense tensor.
template <class T>
struct Tensor {
    std::vector<std::size_t> shape;
    AlignedVector<T> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> dims, T fill = T{})
        : shape(std::move(dims)), data(element_count(shape), fill) {}

    static std::size_t element_count(const std::vector<std::size_t>& dims) {
        return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
    }

    std::size_t size() const noexcept { return data.size(); }
    std::size_t dim(std::size_t i) const { return shape.at(i); }
};

std::string shape_string(const std::vector<std::size_t>& shape);

// Throws NonFinite naming `where` if any element is NaN or infinite.
template <class T>
void require_finite(const Tensor<T>& t, const std::string& where);

}  // namespace tfmd::cnn
