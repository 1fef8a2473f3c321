#pragma once

#include "tfmd/common/matrix.hpp"
#include "tfmd/dsp/time_series.hpp"
#include "tfmd/dsp/window.hpp"
#include "tfmd/tfr/grid.hpp"

#include <cstdint>

namespace tfmd::tfr {

/// Local centers of gravity of the STFT energy.
///
///   t_hat(m,k)     = t_m + Re{V_tw / V_w} / fs          [s]
///   omega_hat(m,k) = (omega_k - Im{V_dw / V_w}) * fs    [rad/s], omega_k = 2 pi k / n_fft
///
/// mask(m,k) is set iff |V_w| > threshold * max|V_w|. Unmasked cells hold
/// their own bin coordinates (no reassignment).
struct ReassignmentField {
    Matrix<double> t_hat;
    Matrix<double> omega_hat;
    Matrix<std::uint8_t> mask;
    TFGrid grid;  // V_w, kept because every consumer needs it
};

ReassignmentField reassignment_operators(const dsp::TimeSeries& ts, const dsp::Window& window, std::size_t hop,
                                         std::size_t n_fft, double threshold);

/// Moves each masked cell's energy to the grid cell nearest (t_hat, omega_hat);
/// unmasked energy stays put and off-grid targets clamp to the edge. Total
/// energy is conserved.
Spectrogram reassigned_spectrogram(const dsp::TimeSeries& ts, const dsp::Window& window, std::size_t hop,
                                   std::size_t n_fft, double threshold);

// Grid coordinates nearest to a reassigned point, clamped to the grid.
std::size_t nearest_frame(double t_hat_s, const TFGrid& g);
std::size_t nearest_bin(double omega_hat_rad_s, const TFGrid& g);

}  // namespace tfmd::tfr
