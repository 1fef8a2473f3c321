#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tfmd::dsp {

using cplx = std::complex<double>;

bool is_power_of_two(std::size_t n) noexcept;
std::size_t next_power_of_two(std::size_t n) noexcept;

/// Direct O(N^2) evaluation of X[k] = sum_n x[n] exp(-j 2 pi k n / N).
/// Reference oracle only; never used on a production path.
std::vector<cplx> dft_naive(std::span<const cplx> x);
std::vector<cplx> dft_naive(std::span<const double> x);

/// Iterative radix-2 FFT. The plan holds the bit-reversal table and
/// twiddles and is immutable after construction, so one plan can be shared
/// across threads.
class FftPlan {
public:
    explicit FftPlan(std::size_t n);  // throws InvalidArgument unless n is a power of two

    std::size_t size() const noexcept { return n_; }

    // In-place forward transform; data.size() must equal size().
    void forward(std::span<cplx> data) const;
    // In-place inverse transform including the 1/N factor.
    void inverse(std::span<cplx> data) const;

private:
    void transform(std::span<cplx> data, bool inverse) const;

    std::size_t n_;
    std::vector<std::size_t> bitrev_;
    std::vector<cplx> twiddles_;  // exp(-j 2 pi k / n), k < n/2
};

std::vector<cplx> fft(std::span<const cplx> x);
std::vector<cplx> fft(std::span<const double> x);

}  // namespace tfmd::dsp
