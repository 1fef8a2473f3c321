#pragma once

#include "tfmd/dsp/time_series.hpp"
#include "tfmd/dsp/window.hpp"
#include "tfmd/tfr/grid.hpp"

#include <array>
#include <string>

namespace tfmd::tfr {

enum class Method { Stft, StftO, StftR, StftOR, StftS };

inline constexpr std::array<Method, 5> kAllMethods{Method::Stft, Method::StftO, Method::StftR, Method::StftOR,
                                                   Method::StftS};

// "STFT", "STFT-O", "STFT-R", "STFT-OR", "STFT-S"
std::string method_code(Method m);
// Lower-case CLI slug: "stft", "stft-o", ...
std::string method_slug(Method m);
// Accepts either form, case-insensitive, with '-' or '_'.
Method parse_method(const std::string& text);

struct TransformConfig {
    dsp::WindowKind window = dsp::WindowKind::Hann;
    std::size_t window_len = 1024;
    std::size_t n_fft = 1024;
    std::size_t hop_nonoverlap = 1024;
    std::size_t hop_overlap = 256;
    double threshold = 1e-4;
};

bool uses_overlap(Method m);

/// Spectrogram of one of the five variants: plain STFT (non-overlap or
/// overlap hop), reassigned STFT (either hop), or |synchrosqueezed STFT|^2
/// at the overlap hop.
Spectrogram transform(const dsp::TimeSeries& ts, Method method, const TransformConfig& cfg = {});

}  // namespace tfmd::tfr
