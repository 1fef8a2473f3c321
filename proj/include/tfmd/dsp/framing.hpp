#pragma once

#include "tfmd/common/matrix.hpp"
#include "tfmd/dsp/time_series.hpp"

#include <cstddef>
#include <vector>

namespace tfmd::dsp {

/// Frame m covers samples [m*hop, m*hop + L); samples past the end of the
/// signal are zero. n_frames = floor((len - 1) / hop) + 1.
struct FrameSet {
    Matrix<double> frames;               // n_frames x L
    std::size_t hop = 0;
    std::vector<double> frame_centers;   // m*hop + (L-1)/2, in samples

    std::size_t n_frames() const noexcept { return frames.rows(); }
    std::size_t window_len() const noexcept { return frames.cols(); }
};

std::size_t frame_count(std::size_t signal_len, std::size_t hop);

// Frames that lie entirely inside the signal (no zero padding).
std::size_t interior_frame_count(std::size_t signal_len, std::size_t window_len, std::size_t hop);

FrameSet frame_signal(const TimeSeries& ts, std::size_t window_len, std::size_t hop);

}  // namespace tfmd::dsp
