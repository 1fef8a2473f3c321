#pragma once

#include "tfmd/common/matrix.hpp"

#include <complex>
#include <cstddef>
#include <filesystem>
#include <vector>

namespace tfmd::tfr {

using cplx = std::complex<double>;

/// One-sided complex time-frequency grid (n_frames x n_fft/2+1).
/// times_s[m] is the window-center time of frame m and
/// freqs_hz[k] = k * fs / n_fft.
struct TFGrid {
    Matrix<cplx> values;
    std::vector<double> times_s;
    std::vector<double> freqs_hz;
    double sample_rate_hz = 0.0;
    std::size_t window_len = 0;
    std::size_t hop = 0;
    std::size_t n_fft = 0;

    std::size_t n_frames() const noexcept { return values.rows(); }
    std::size_t n_bins() const noexcept { return values.cols(); }
};

/// Nonnegative energy over the same axes as the grid it came from.
struct Spectrogram {
    Matrix<double> energy;
    std::vector<double> times_s;
    std::vector<double> freqs_hz;
    double sample_rate_hz = 0.0;
    std::size_t window_len = 0;
    std::size_t hop = 0;
    std::size_t n_fft = 0;

    std::size_t n_frames() const noexcept { return energy.rows(); }
    std::size_t n_bins() const noexcept { return energy.cols(); }
    double total_energy() const;
};

/// |values|^2, axes copied.
Spectrogram spectrogram(const TFGrid& g);

// Export: JSON header line + little-endian float32 payload in frame-major,
// bin-minor order (complex values as interleaved re/im pairs).
void write_spectrogram(const std::filesystem::path& path, const Spectrogram& s);
Spectrogram read_spectrogram(const std::filesystem::path& path);
void write_tfgrid(const std::filesystem::path& path, const TFGrid& g);
TFGrid read_tfgrid(const std::filesystem::path& path);

}  // namespace tfmd::tfr
