#include "tfmd/dsp/fft.hpp"

#include "tfmd/common/error.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace tfmd::dsp {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) noexcept {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<cplx> dft_naive(std::span<const cplx> x) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            // Reduce k*i mod N first so the phase argument stays small.
            const double phase = -2.0 * std::numbers::pi * static_cast<double>((k * i) % n) / static_cast<double>(n);
            acc += x[i] * cplx(std::cos(phase), std::sin(phase));
        }
        out[k] = acc;
    }
    return out;
}

std::vector<cplx> dft_naive(std::span<const double> x) {
    std::vector<cplx> c(x.begin(), x.end());
    return dft_naive(std::span<const cplx>(c));
}

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (!is_power_of_two(n)) throw InvalidArgument("FFT length must be a power of two, got " + std::to_string(n));
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    bitrev_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b) {
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        }
        bitrev_[i] = r;
    }
    twiddles_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double phase = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        twiddles_[k] = cplx(std::cos(phase), std::sin(phase));
    }
}

void FftPlan::transform(std::span<cplx> data, bool inverse) const {
    if (data.size() != n_) throw InvalidArgument("FFT input length does not match plan size");
    for (std::size_t i = 0; i < n_; ++i) {
        if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n_ / len;
        for (std::size_t start = 0; start < n_; start += len) {
            for (std::size_t j = 0; j < half; ++j) {
                cplx w = twiddles_[j * stride];
                if (inverse) w = std::conj(w);
                const cplx u = data[start + j];
                const cplx v = data[start + j + half] * w;
                data[start + j] = u + v;
                data[start + j + half] = u - v;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n_);
        for (auto& v : data) v *= scale;
    }
}

void FftPlan::forward(std::span<cplx> data) const { transform(data, false); }
void FftPlan::inverse(std::span<cplx> data) const { transform(data, true); }

std::vector<cplx> fft(std::span<const cplx> x) {
    FftPlan plan(x.size());
    std::vector<cplx> out(x.begin(), x.end());
    plan.forward(out);
    return out;
}

std::vector<cplx> fft(std::span<const double> x) {
    std::vector<cplx> c(x.begin(), x.end());
    return fft(std::span<const cplx>(c));
}

}  // namespace tfmd::dsp
