#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace oracle {

namespace {
constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;
}

std::vector<cplx> dft(std::span<const cplx> x) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    // Twiddle table indexed by (k * i) mod n, each entry from its own cos/sin.
    std::vector<long double> cos_t(n), sin_t(n);
    for (std::size_t j = 0; j < n; ++j) {
        const long double a = -kTwoPi * static_cast<long double>(j) / static_cast<long double>(n);
        cos_t[j] = std::cos(a);
        sin_t[j] = std::sin(a);
    }
    for (std::size_t k = 0; k < n; ++k) {
        long double re = 0, im = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = (k * i) % n;
            const long double c = cos_t[j], s = sin_t[j];
            re += x[i].real() * c - x[i].imag() * s;
            im += x[i].real() * s + x[i].imag() * c;
        }
        out[k] = {static_cast<double>(re), static_cast<double>(im)};
    }
    return out;
}

std::vector<cplx> dft(std::span<const double> x) {
    std::vector<cplx> c(x.begin(), x.end());
    return dft(c);
}

cplx stft_cell(std::span<const double> x, std::span<const double> w, std::size_t start, std::size_t k,
               std::size_t n_fft) {
    const long double c = (static_cast<long double>(w.size()) - 1.0L) / 2.0L;
    long double re = 0, im = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (start + i >= x.size()) break;
        const long double v = static_cast<long double>(x[start + i]) * w[i];
        const long double a = -kTwoPi * static_cast<long double>(k) * (static_cast<long double>(i) - c) /
                              static_cast<long double>(n_fft);
        re += v * std::cos(a);
        im += v * std::sin(a);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

double hann(std::size_t n, std::size_t L) {
    return 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(L - 1));
}

double gaussian(std::size_t n, std::size_t L) {
    const double c = (static_cast<double>(L) - 1.0) / 2.0;
    const double sigma = static_cast<double>(L) / 6.0;
    const double u = (static_cast<double>(n) - c) / sigma;
    return std::exp(-0.5 * u * u);
}

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = d(rng);
    return x;
}

std::vector<double> tone(std::size_t n, double fs, double f0, double amp, double phase) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = amp * std::cos(2.0 * std::numbers::pi * f0 * static_cast<double>(i) / fs + phase);
    }
    return x;
}

std::vector<double> chirp(std::size_t n, double fs, double f0, double rate) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        x[i] = std::cos(2.0 * std::numbers::pi * (f0 * t + 0.5 * rate * t * t));
    }
    return x;
}

double hann_amplitude_at(std::span<const double> x, std::size_t k) {
    const std::size_t n = x.size();
    long double re = 0, im = 0, wsum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double w = 0.5L - 0.5L * std::cos(kTwoPi * static_cast<long double>(i) / static_cast<long double>(n));
        const long double a = -kTwoPi * static_cast<long double>((k * i) % n) / static_cast<long double>(n);
        re += x[i] * w * std::cos(a);
        im += x[i] * w * std::sin(a);
        wsum += w;
    }
    return static_cast<double>(2.0L * std::sqrt(re * re + im * im) / wsum);
}

SineFit fit_sines(std::span<const double> x, double fs, std::span<const double> freqs_hz) {
    const std::size_t p = 1 + 2 * freqs_hz.size();
    std::vector<long double> ata(p * p, 0.0L), atb(p, 0.0L), row(p);
    const auto fill_row = [&](std::size_t n) {
        row[0] = 1.0L;
        for (std::size_t j = 0; j < freqs_hz.size(); ++j) {
            const long double a = kTwoPi * freqs_hz[j] * static_cast<long double>(n) / fs;
            row[1 + 2 * j] = std::cos(a);
            row[2 + 2 * j] = std::sin(a);
        }
    };
    for (std::size_t n = 0; n < x.size(); ++n) {
        fill_row(n);
        for (std::size_t i = 0; i < p; ++i) {
            atb[i] += row[i] * x[n];
            for (std::size_t j = 0; j < p; ++j) ata[i * p + j] += row[i] * row[j];
        }
    }
    // Gaussian elimination with partial pivoting.
    for (std::size_t c = 0; c < p; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < p; ++r) {
            if (std::abs(ata[r * p + c]) > std::abs(ata[piv * p + c])) piv = r;
        }
        for (std::size_t j = 0; j < p; ++j) std::swap(ata[c * p + j], ata[piv * p + j]);
        std::swap(atb[c], atb[piv]);
        for (std::size_t r = c + 1; r < p; ++r) {
            const long double f = ata[r * p + c] / ata[c * p + c];
            for (std::size_t j = c; j < p; ++j) ata[r * p + j] -= f * ata[c * p + j];
            atb[r] -= f * atb[c];
        }
    }
    std::vector<long double> beta(p);
    for (std::size_t c = p; c-- > 0;) {
        long double acc = atb[c];
        for (std::size_t j = c + 1; j < p; ++j) acc -= ata[c * p + j] * beta[j];
        beta[c] = acc / ata[c * p + c];
    }
    SineFit fit;
    for (std::size_t j = 0; j < freqs_hz.size(); ++j) {
        fit.amplitudes.push_back(static_cast<double>(std::hypot(beta[1 + 2 * j], beta[2 + 2 * j])));
    }
    long double sse = 0.0L;
    for (std::size_t n = 0; n < x.size(); ++n) {
        fill_row(n);
        long double y = 0.0L;
        for (std::size_t i = 0; i < p; ++i) y += row[i] * beta[i];
        sse += (x[n] - y) * (x[n] - y);
    }
    fit.residual_var = static_cast<double>(sse / static_cast<long double>(x.size()));
    return fit;
}

double percentile(std::vector<double> values, std::vector<double> weights, double q) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double acc = 0.0;
    for (const auto i : order) {
        acc += weights[i];
        if (acc >= q * total) return values[i];
    }
    return values.empty() ? 0.0 : values[order.back()];
}

}  // namespace oracle
