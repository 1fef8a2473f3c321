#include "tfmd/tfr/stft.hpp"

#include "tfmd/common/error.hpp"
#include "tfmd/dsp/fft.hpp"
#include "tfmd/dsp/framing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tfmd::tfr {

TFGrid stft(const dsp::TimeSeries& ts, std::span<const double> taps, std::size_t hop, std::size_t n_fft) {
    const std::size_t L = taps.size();
    if (L < 2) throw InvalidArgument("window length must be at least 2");
    if (hop == 0) throw InvalidArgument("hop must be positive");
    if (n_fft < L) throw InvalidArgument("n_fft must be at least the window length");
    if (!dsp::is_power_of_two(n_fft)) throw InvalidArgument("n_fft must be a power of two");

    const auto& x = ts.samples();
    const double fs = ts.sample_rate_hz();
    const std::size_t n_frames = dsp::frame_count(x.size(), hop);
    const std::size_t n_bins = n_fft / 2 + 1;
    const double c = (static_cast<double>(L) - 1.0) / 2.0;

    TFGrid g;
    g.values = Matrix<cplx>(n_frames, n_bins);
    g.times_s.resize(n_frames);
    g.freqs_hz.resize(n_bins);
    g.sample_rate_hz = fs;
    g.window_len = L;
    g.hop = hop;
    g.n_fft = n_fft;
    for (std::size_t k = 0; k < n_bins; ++k) g.freqs_hz[k] = static_cast<double>(k) * fs / static_cast<double>(n_fft);

    // exp(+j 2 pi k c / N) moves the phase reference from the frame start to
    // the window center.
    std::vector<cplx> center_shift(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
        center_shift[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) * c / static_cast<double>(n_fft));
    }

    const dsp::FftPlan plan(n_fft);
    std::vector<cplx> buf(n_fft);
    for (std::size_t m = 0; m < n_frames; ++m) {
        const std::size_t start = m * hop;
        std::fill(buf.begin(), buf.end(), cplx{});
        const std::size_t avail = std::min(L, x.size() - start);
        for (std::size_t i = 0; i < avail; ++i) buf[i] = x[start + i] * taps[i];
        plan.forward(buf);
        auto row = g.values.row(m);
        for (std::size_t k = 0; k < n_bins; ++k) row[k] = buf[k] * center_shift[k];
        g.times_s[m] = (static_cast<double>(start) + c) / fs;
    }
    return g;
}

TFGrid stft(const dsp::TimeSeries& ts, const dsp::Window& window, std::size_t hop, std::size_t n_fft) {
    return stft(ts, std::span<const double>(window.coefficients), hop, n_fft);
}

}  // namespace tfmd::tfr
