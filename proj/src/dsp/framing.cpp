#include "tfmd/dsp/framing.hpp"

#include "tfmd/common/error.hpp"

#include <algorithm>

namespace tfmd::dsp {

std::size_t frame_count(std::size_t signal_len, std::size_t hop) {
    if (hop == 0) throw InvalidArgument("hop must be positive");
    if (signal_len == 0) return 0;
    return (signal_len - 1) / hop + 1;
}

std::size_t interior_frame_count(std::size_t signal_len, std::size_t window_len, std::size_t hop) {
    if (hop == 0) throw InvalidArgument("hop must be positive");
    if (signal_len < window_len) return 0;
    return (signal_len - window_len) / hop + 1;
}

FrameSet frame_signal(const TimeSeries& ts, std::size_t window_len, std::size_t hop) {
    if (window_len < 2) throw InvalidArgument("window length must be at least 2");
    if (hop == 0 || hop > window_len) throw InvalidArgument("hop must satisfy 1 <= hop <= window length");

    const auto& x = ts.samples();
    const std::size_t n_frames = frame_count(x.size(), hop);
    FrameSet fs;
    fs.frames = Matrix<double>(n_frames, window_len, 0.0);
    fs.hop = hop;
    fs.frame_centers.resize(n_frames);
    const double c = (static_cast<double>(window_len) - 1.0) / 2.0;
    for (std::size_t m = 0; m < n_frames; ++m) {
        const std::size_t start = m * hop;
        const std::size_t stop = std::min(start + window_len, x.size());
        std::copy(x.begin() + static_cast<std::ptrdiff_t>(start), x.begin() + static_cast<std::ptrdiff_t>(stop),
                  fs.frames.row(m).begin());
        fs.frame_centers[m] = static_cast<double>(start) + c;
    }
    return fs;
}

}  // namespace tfmd::dsp
