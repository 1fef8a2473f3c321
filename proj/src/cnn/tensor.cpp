#include "tfmd/cnn/tensor.hpp"

#include "tfmd/common/error.hpp"

#include <bit>
#include <cstdint>

namespace tfmd::cnn {

std::string shape_string(const std::vector<std::size_t>& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += "x";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

namespace {

// An all-ones exponent marks NaN or Inf; the OR-reduction over integers
// vectorizes where a per-element isfinite branch does not.
bool any_non_finite(const AlignedVector<float>& v) {
    std::uint32_t hit = 0;
    for (const float x : v) {
        const auto e = std::bit_cast<std::uint32_t>(x) & 0x7f800000u;
        hit |= static_cast<std::uint32_t>(e == 0x7f800000u);
    }
    return hit != 0;
}

bool any_non_finite(const AlignedVector<double>& v) {
    std::uint64_t hit = 0;
    for (const double x : v) {
        const auto e = std::bit_cast<std::uint64_t>(x) & 0x7ff0000000000000ull;
        hit |= static_cast<std::uint64_t>(e == 0x7ff0000000000000ull);
    }
    return hit != 0;
}

}  // namespace

template <class T>
void require_finite(const Tensor<T>& t, const std::string& where) {
    if (any_non_finite(t.data)) throw NonFinite("non-finite value in " + where);
}

template void require_finite(const Tensor<float>&, const std::string&);
template void require_finite(const Tensor<double>&, const std::string&);

}  // namespace tfmd::cnn
