#include "tfmd/imaging/render.hpp"

#include "tfmd/common/error.hpp"

#include <algorithm>
#include <cmath>

namespace tfmd::imaging {

namespace {

constexpr double kPalette[256][3] = {
#include "viridis_table.inc"
};

}  // namespace

Matrix<double> to_db(const tfr::Spectrogram& s, double floor_db) {
    if (!(floor_db < 0.0)) throw InvalidArgument("dB floor must be negative");
    Matrix<double> out(s.n_frames(), s.n_bins(), floor_db);
    double peak = 0.0;
    for (double e : s.energy.data()) peak = std::max(peak, e);
    if (peak <= 0.0) return out;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double e = s.energy.data()[i];
        if (e > 0.0) out.data()[i] = std::max(floor_db, 10.0 * std::log10(e / peak));
    }
    return out;
}

Matrix<double> normalize01(const Matrix<double>& m) {
    Matrix<double> out(m.rows(), m.cols(), 0.5);
    if (m.empty()) return out;
    const auto [lo, hi] = std::minmax_element(m.data().begin(), m.data().end());
    const double min = *lo;
    const double span = *hi - *lo;
    if (!(span > 0.0)) return out;
    for (std::size_t i = 0; i < m.size(); ++i) out.data()[i] = (m.data()[i] - min) / span;
    return out;
}

Matrix<double> resize_bilinear(const Matrix<double>& m, std::size_t out_w, std::size_t out_h) {
    if (out_w == 0 || out_h == 0) throw InvalidArgument("output dimensions must be positive");
    if (m.rows() == 0 || m.cols() == 0) throw InvalidArgument("input matrix is empty");

    const auto axis = [](std::size_t out_n, std::size_t in_n, std::size_t i, std::size_t& i0, std::size_t& i1,
                         double& frac) {
        const double pos = out_n > 1 ? static_cast<double>(i) * static_cast<double>(in_n - 1) / static_cast<double>(out_n - 1)
                                     : 0.0;
        i0 = std::min(static_cast<std::size_t>(std::floor(pos)), in_n - 1);
        i1 = std::min(i0 + 1, in_n - 1);
        frac = pos - static_cast<double>(i0);
    };

    Matrix<double> out(out_h, out_w);
    for (std::size_t r = 0; r < out_h; ++r) {
        std::size_t r0, r1;
        double fr;
        axis(out_h, m.rows(), r, r0, r1, fr);
        for (std::size_t c = 0; c < out_w; ++c) {
            std::size_t c0, c1;
            double fc;
            axis(out_w, m.cols(), c, c0, c1, fc);
            const double top = m(r0, c0) + (m(r0, c1) - m(r0, c0)) * fc;
            const double bottom = m(r1, c0) + (m(r1, c1) - m(r1, c0)) * fc;
            out(r, c) = top + (bottom - top) * fr;
        }
    }
    return out;
}

std::array<double, 3> colormap_rgb(double v) {
    v = std::clamp(v, 0.0, 1.0);
    const double pos = v * 255.0;
    const auto i0 = std::min<std::size_t>(static_cast<std::size_t>(pos), 255);
    const auto i1 = std::min<std::size_t>(i0 + 1, 255);
    const double f = pos - static_cast<double>(i0);
    std::array<double, 3> rgb{};
    for (int ch = 0; ch < 3; ++ch) rgb[ch] = kPalette[i0][ch] + (kPalette[i1][ch] - kPalette[i0][ch]) * f;
    return rgb;
}

double luminance(const std::array<double, 3>& rgb) { return 0.2126 * rgb[0] + 0.7152 * rgb[1] + 0.0722 * rgb[2]; }

RGBImage apply_colormap(const Matrix<double>& m, ColormapStats* stats) {
    RGBImage img(static_cast<int>(m.cols()), static_cast<int>(m.rows()));
    std::size_t clamped = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            double v = m(r, c);
            if (!(v >= 0.0 && v <= 1.0)) {
                ++clamped;
                v = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
            }
            const auto rgb = colormap_rgb(v);
            auto* px = img.at(static_cast<int>(r), static_cast<int>(c));
            for (int ch = 0; ch < 3; ++ch) px[ch] = static_cast<std::uint8_t>(std::lround(rgb[ch] * 255.0));
        }
    }
    if (stats) stats->clamped += clamped;
    return img;
}

RGBImage render_spectrogram(const tfr::Spectrogram& s, const RenderOptions& opts) {
    if (s.n_frames() == 0 || s.n_bins() == 0) throw InvalidArgument("cannot render an empty spectrogram");

    std::size_t n_bins = s.n_bins();
    if (opts.max_freq_hz) {
        n_bins = 0;
        while (n_bins < s.n_bins() && s.freqs_hz[n_bins] <= *opts.max_freq_hz) ++n_bins;
        if (n_bins == 0) throw InvalidArgument("frequency crop leaves no bins");
    }
    tfr::Spectrogram band = s;
    if (n_bins != s.n_bins()) {
        band.energy = Matrix<double>(s.n_frames(), n_bins);
        for (std::size_t m = 0; m < s.n_frames(); ++m) {
            std::copy_n(s.energy.row(m).begin(), n_bins, band.energy.row(m).begin());
        }
        band.freqs_hz.resize(n_bins);
    }

    const auto unit = normalize01(to_db(band, opts.floor_db));
    // Rows become frequency (highest first), columns time.
    Matrix<double> oriented(n_bins, unit.rows());
    for (std::size_t m = 0; m < unit.rows(); ++m) {
        for (std::size_t k = 0; k < n_bins; ++k) oriented(n_bins - 1 - k, m) = unit(m, k);
    }
    return apply_colormap(resize_bilinear(oriented, opts.width, opts.height));
}

RGBImage render_signal(const dsp::TimeSeries& ts, tfr::Method method, const tfr::TransformConfig& tcfg,
                       const RenderOptions& opts) {
    return render_spectrogram(tfr::transform(ts, method, tcfg), opts);
}

std::vector<float> image_to_chw(const RGBImage& img) {
    const std::size_t plane = static_cast<std::size_t>(img.width) * img.height;
    std::vector<float> out(plane * 3);
    for (std::size_t p = 0; p < plane; ++p) {
        for (std::size_t ch = 0; ch < 3; ++ch) out[ch * plane + p] = static_cast<float>(img.pixels[p * 3 + ch]) / 255.0f;
    }
    return out;
}

}  // namespace tfmd::imaging
