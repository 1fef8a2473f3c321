#pragma once

#include "tfmd/dsp/time_series.hpp"
#include "tfmd/dsp/window.hpp"
#include "tfmd/tfr/grid.hpp"

namespace tfmd::tfr {

/// Fourier synchrosqueezing: within each frame, every masked coefficient
/// V[m,k] is added (as a complex number) to the bin nearest omega_hat(m,k).
/// Coefficients below the threshold are dropped, so for every frame
/// sum_k T[m,k] equals the sum of the masked V[m,k].
TFGrid synchrosqueeze(const dsp::TimeSeries& ts, const dsp::Window& window, std::size_t hop, std::size_t n_fft,
                      double threshold);

/// Decimated inversion at the frame centers:
///
///   x[m*hop + c] = Re{ T[m,0] + 2 sum_{0<k<N/2} T[m,k] + T[m,N/2] } / (n_fft * w(c))
///
/// The returned series is sampled at fs/hop; sample m sits at grid.times_s[m].
/// Throws InvalidWindow when w(c) is zero and InvalidArgument when the window
/// length does not match the grid.
dsp::TimeSeries reconstruct_from_sst(const TFGrid& g, const dsp::Window& window);

}  // namespace tfmd::tfr
