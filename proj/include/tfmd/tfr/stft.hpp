#pragma once

#include "tfmd/dsp/time_series.hpp"
#include "tfmd/dsp/window.hpp"
#include "tfmd/tfr/grid.hpp"

#include <span>

namespace tfmd::tfr {

/// Short-time Fourier transform with phase referenced to each window center:
///
///   V[m,k] = sum_i x[m*hop + i] w[i] exp(-j 2 pi k (i - c) / n_fft),  c = (L-1)/2
///
/// Frames follow dsp::frame_signal (zero-padded tail). n_fft must be a power
/// of two and at least the window length.
TFGrid stft(const dsp::TimeSeries& ts, const dsp::Window& window, std::size_t hop, std::size_t n_fft);

// Same transform with arbitrary window taps (used for the auxiliary
// time-weighted and derivative windows).
TFGrid stft(const dsp::TimeSeries& ts, std::span<const double> taps, std::size_t hop, std::size_t n_fft);

}  // namespace tfmd::tfr
