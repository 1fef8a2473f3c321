#include "tfmd/tfr/reassignment.hpp"

#include "tfmd/common/error.hpp"
#include "tfmd/tfr/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tfmd::tfr {

namespace {

std::size_t clamp_index(double position, std::size_t count) {
    if (!(position > 0.0)) return 0;  // also catches NaN
    const double r = std::round(position);
    if (r >= static_cast<double>(count - 1)) return count - 1;
    return static_cast<std::size_t>(r);
}

}  // namespace

std::size_t nearest_frame(double t_hat_s, const TFGrid& g) {
    const double c = (static_cast<double>(g.window_len) - 1.0) / 2.0;
    return clamp_index((t_hat_s * g.sample_rate_hz - c) / static_cast<double>(g.hop), g.n_frames());
}

std::size_t nearest_bin(double omega_hat_rad_s, const TFGrid& g) {
    const double cycles_per_sample = omega_hat_rad_s / (2.0 * std::numbers::pi * g.sample_rate_hz);
    return clamp_index(cycles_per_sample * static_cast<double>(g.n_fft), g.n_bins());
}

ReassignmentField reassignment_operators(const dsp::TimeSeries& ts, const dsp::Window& window, std::size_t hop,
                                         std::size_t n_fft, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw InvalidArgument("threshold must lie in (0, 1)");

    ReassignmentField f;
    f.grid = stft(ts, window, hop, n_fft);
    const TFGrid v_tw = stft(ts, std::span<const double>(window.time_weighted), hop, n_fft);
    const TFGrid v_dw = stft(ts, std::span<const double>(window.derivative), hop, n_fft);

    const auto& g = f.grid;
    const std::size_t rows = g.n_frames();
    const std::size_t cols = g.n_bins();
    const double fs = g.sample_rate_hz;

    double peak = 0.0;
    for (const auto& v : g.values.data()) peak = std::max(peak, std::abs(v));
    const double cutoff = threshold * peak;

    f.t_hat = Matrix<double>(rows, cols);
    f.omega_hat = Matrix<double>(rows, cols);
    f.mask = Matrix<std::uint8_t>(rows, cols, 0);
    for (std::size_t m = 0; m < rows; ++m) {
        for (std::size_t k = 0; k < cols; ++k) {
            const double omega_k = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_fft);
            const cplx v = g.values(m, k);
            if (peak > 0.0 && std::abs(v) > cutoff) {
                const double dt = (v_tw.values(m, k) / v).real();
                const double dw = (v_dw.values(m, k) / v).imag();
                f.t_hat(m, k) = g.times_s[m] + dt / fs;
                f.omega_hat(m, k) = (omega_k - dw) * fs;
                f.mask(m, k) = 1;
            } else {
                f.t_hat(m, k) = g.times_s[m];
                f.omega_hat(m, k) = omega_k * fs;
            }
        }
    }
    return f;
}

Spectrogram reassigned_spectrogram(const dsp::TimeSeries& ts, const dsp::Window& window, std::size_t hop,
                                   std::size_t n_fft, double threshold) {
    const auto f = reassignment_operators(ts, window, hop, n_fft, threshold);
    Spectrogram plain = spectrogram(f.grid);
    Spectrogram out = plain;
    std::fill(out.energy.data().begin(), out.energy.data().end(), 0.0);

    // Sequential scatter in (frame, bin) order keeps the result bit-stable.
    for (std::size_t m = 0; m < plain.n_frames(); ++m) {
        for (std::size_t k = 0; k < plain.n_bins(); ++k) {
            const double e = plain.energy(m, k);
            if (f.mask(m, k)) {
                out.energy(nearest_frame(f.t_hat(m, k), f.grid), nearest_bin(f.omega_hat(m, k), f.grid)) += e;
            } else {
                out.energy(m, k) += e;
            }
        }
    }
    return out;
}

}  // namespace tfmd::tfr
