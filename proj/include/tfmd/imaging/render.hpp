#pragma once

#include "tfmd/common/matrix.hpp"
#include "tfmd/imaging/image.hpp"
#include "tfmd/dsp/time_series.hpp"
#include "tfmd/tfr/grid.hpp"
#include "tfmd/tfr/transform.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace tfmd::imaging {

/// 10 log10(E / max E) clamped below at floor_db (< 0). An all-zero
/// spectrogram maps to floor_db everywhere. Same shape as the input.
Matrix<double> to_db(const tfr::Spectrogram& s, double floor_db);

/// Affine map of [min, max] onto [0, 1]; a constant matrix maps to 0.5.
Matrix<double> normalize01(const Matrix<double>& m);

/// Corner-aligned bilinear resampling: output (r, c) samples the input at
/// (r * (H-1)/(h-1), c * (W-1)/(w-1)). Output is out_h rows x out_w cols.
Matrix<double> resize_bilinear(const Matrix<double>& m, std::size_t out_w, std::size_t out_h);

// Linearly interpolated palette color for v in [0, 1] (not quantized).
std::array<double, 3> colormap_rgb(double v);

// Rec. 709 luma of a color with components in [0, 1].
double luminance(const std::array<double, 3>& rgb);

struct ColormapStats {
    std::size_t clamped = 0;  // values outside [0, 1] (or NaN) that were clamped
};

/// Maps a [0, 1] matrix through the shipped 256-entry palette. The image has
/// m.cols() columns and m.rows() rows.
RGBImage apply_colormap(const Matrix<double>& m, ColormapStats* stats = nullptr);

struct RenderOptions {
    double floor_db = -80.0;
    std::optional<double> max_freq_hz;  // keep bins with f <= max_freq_hz; full band when unset
    std::size_t width = 64;
    std::size_t height = 64;
};

/// Spectrogram -> dB -> [0, 1] -> frequency-descending rows, time columns ->
/// bilinear resize -> palette. Depends on the spectrogram only.
RGBImage render_spectrogram(const tfr::Spectrogram& s, const RenderOptions& opts = {});

// transform() followed by render_spectrogram().
RGBImage render_signal(const dsp::TimeSeries& ts, tfr::Method method, const tfr::TransformConfig& tcfg = {},
                       const RenderOptions& opts = {});

// Channel-planar floats in [0, 1]: out[(ch * height + row) * width + col].
std::vector<float> image_to_chw(const RGBImage& img);

}  // namespace tfmd::imaging
