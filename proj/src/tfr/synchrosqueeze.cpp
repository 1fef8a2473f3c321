#include "tfmd/tfr/synchrosqueeze.hpp"

#include "tfmd/common/error.hpp"
#include "tfmd/tfr/reassignment.hpp"

#include <algorithm>

namespace tfmd::tfr {

TFGrid synchrosqueeze(const dsp::TimeSeries& ts, const dsp::Window& window, std::size_t hop, std::size_t n_fft,
                      double threshold) {
    const auto f = reassignment_operators(ts, window, hop, n_fft, threshold);
    TFGrid out = f.grid;
    std::fill(out.values.data().begin(), out.values.data().end(), cplx{});
    for (std::size_t m = 0; m < out.n_frames(); ++m) {
        for (std::size_t k = 0; k < out.n_bins(); ++k) {
            if (!f.mask(m, k)) continue;
            out.values(m, nearest_bin(f.omega_hat(m, k), f.grid)) += f.grid.values(m, k);
        }
    }
    return out;
}

dsp::TimeSeries reconstruct_from_sst(const TFGrid& g, const dsp::Window& window) {
    if (window.center_value == 0.0) throw InvalidWindow("window vanishes at its center; SST inversion undefined");
    if (window.length() != g.window_len) throw InvalidArgument("window length does not match the grid");
    if (g.n_frames() == 0) throw InvalidArgument("empty grid");

    const std::size_t nyquist = g.n_fft / 2;
    const double scale = 1.0 / (static_cast<double>(g.n_fft) * window.center_value);
    std::vector<double> out(g.n_frames());
    for (std::size_t m = 0; m < g.n_frames(); ++m) {
        cplx acc{};
        for (std::size_t k = 0; k < g.n_bins(); ++k) {
            const double weight = (k == 0 || k == nyquist) ? 1.0 : 2.0;
            acc += weight * g.values(m, k);
        }
        out[m] = acc.real() * scale;
    }
    return dsp::TimeSeries(std::move(out), g.sample_rate_hz / static_cast<double>(g.hop));
}

}  // namespace tfmd::tfr
