#include "oracles.hpp"

#include "tfmd/common/error.hpp"
#include "tfmd/dsp/framing.hpp"
#include "tfmd/tfr/reassignment.hpp"
#include "tfmd/tfr/stft.hpp"
#include "tfmd/tfr/synchrosqueeze.hpp"
#include "tfmd/tfr/transform.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>

using namespace tfmd;
using namespace tfmd::tfr;
using dsp::make_window;
using dsp::TimeSeries;
using dsp::WindowKind;

namespace {

constexpr double kFs = 10000.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool interior(std::size_t m, std::size_t hop, std::size_t L, std::size_t len) { return m * hop + L <= len; }

// Smallest number of contiguous bins around the peak holding half the energy.
std::size_t half_energy_width(const std::vector<double>& marginal) {
    const double total = std::accumulate(marginal.begin(), marginal.end(), 0.0);
    const auto peak = static_cast<std::size_t>(std::max_element(marginal.begin(), marginal.end()) - marginal.begin());
    std::size_t lo = peak, hi = peak;
    double acc = marginal[peak];
    while (acc < 0.5 * total && hi - lo + 1 < marginal.size()) {
        const double left = lo > 0 ? marginal[lo - 1] : -1.0;
        const double right = hi + 1 < marginal.size() ? marginal[hi + 1] : -1.0;
        if (left >= right) {
            acc += marginal[--lo];
        } else {
            acc += marginal[++hi];
        }
    }
    return hi - lo + 1;
}

std::vector<double> frequency_marginal(const Spectrogram& s) {
    std::vector<double> m(s.n_bins(), 0.0);
    for (std::size_t r = 0; r < s.n_frames(); ++r) {
        for (std::size_t k = 0; k < s.n_bins(); ++k) m[k] += s.energy(r, k);
    }
    return m;
}

double peak_fraction(const std::vector<double>& marginal) {
    return *std::max_element(marginal.begin(), marginal.end()) /
           std::accumulate(marginal.begin(), marginal.end(), 0.0);
}

}  // namespace

TEST_CASE("stft axes and validation") {
    const TimeSeries ts(oracle::random_signal(3000, 1), kFs);
    const auto w = make_window(WindowKind::Hann, 256);
    const auto g = stft(ts, w, 64, 512);
    CHECK(g.n_bins() == 257);
    CHECK(g.n_frames() == dsp::frame_count(3000, 64));
    for (std::size_t k = 0; k < g.n_bins(); ++k) CHECK(g.freqs_hz[k] == doctest::Approx(k * kFs / 512).epsilon(1e-15));
    for (std::size_t m = 0; m < g.n_frames(); ++m) {
        CHECK(g.times_s[m] == doctest::Approx((m * 64 + 127.5) / kFs).epsilon(1e-15));
        if (m) CHECK(g.times_s[m] > g.times_s[m - 1]);
    }
    CHECK_THROWS_AS(stft(ts, w, 64, 128), InvalidArgument);
    CHECK_THROWS_AS(stft(ts, w, 64, 384), InvalidArgument);
    CHECK_THROWS_AS(stft(ts, w, 0, 512), InvalidArgument);
}

TEST_CASE("stft matches the direct definition") {
    const auto x = oracle::random_signal(2000, 9);
    const TimeSeries ts(x, kFs);
    for (const auto kind : {WindowKind::Hann, WindowKind::Gaussian}) {
        const auto w = make_window(kind, 100);
        const auto g = stft(ts, w, 37, 128);
        for (const std::size_t m : {std::size_t{0}, std::size_t{5}, g.n_frames() - 1}) {
            for (const std::size_t k : {0, 1, 17, 63, 64}) {
                const auto ref = oracle::stft_cell(x, w.coefficients, m * 37, k, 128);
                CHECK(std::abs(g.values(m, k) - ref) < 1e-10);
            }
        }
    }
}

TEST_CASE("stft of zeros and of an exact-bin cosine") {
    const TimeSeries zeros(std::vector<double>(4096, 0.0), kFs);
    const auto gz = stft(zeros, make_window(WindowKind::Hann, 1024), 256, 1024);
    for (const auto& v : gz.values.data()) {
        CHECK(v == cplx(0, 0));
    }
    const std::size_t N = 256, k0 = 19;
    const TimeSeries c(oracle::tone(N * 8, kFs, k0 * kFs / N, 1.0, 0.3), kFs);
    const auto g = stft(c, make_window(WindowKind::Rectangular, N), N, N);
    REQUIRE(g.n_frames() == 8);
    for (std::size_t m = 0; m < 8; ++m) {
        for (std::size_t k = 0; k < g.n_bins(); ++k) {
            if (k == k0) {
                CHECK(std::abs(std::abs(g.values(m, k)) - N / 2.0) < 1e-9);
            } else {
                CHECK(std::abs(g.values(m, k)) < 1e-9);
            }
        }
    }
}

TEST_CASE("stft windowed-energy identity") {
    // Two-sided sum_k |V[m,k]|^2 / N = sum_i (x[m*hop+i] w[i])^2 for every
    // frame, so over interior frames the grid energy equals
    // sum_n x[n]^2 * sum_m w[n - m*hop]^2.
    const std::size_t L = 1024, hop = 256, len = 8192;
    const auto w = make_window(WindowKind::Hann, L);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto x = oracle::random_signal(len, seed);
        const auto g = stft(TimeSeries(x, kFs), w, hop, L);
        double grid = 0.0, direct = 0.0;
        for (std::size_t m = 0; interior(m, hop, L, len); ++m) {
            for (std::size_t k = 0; k < g.n_bins(); ++k) {
                const double e = std::norm(g.values(m, k));
                grid += (k == 0 || k == L / 2) ? e : 2.0 * e;
            }
            for (std::size_t i = 0; i < L; ++i) direct += std::pow(x[m * hop + i] * w.coefficients[i], 2);
        }
        CHECK(std::abs(grid / L - direct) / direct < 1e-6);
    }
}

TEST_CASE("spectrogram") {
    TFGrid g;
    g.values = Matrix<cplx>(2, 3, cplx(0, 0));
    g.values(1, 2) = {3.0, 4.0};
    const auto s = spectrogram(g);
    CHECK(s.energy(1, 2) == 25.0);
    CHECK(s.energy(0, 0) == 0.0);
    const TimeSeries ts(oracle::random_signal(2048, 4), kFs);
    const auto r = spectrogram(stft(ts, make_window(WindowKind::Hann, 256), 64, 256));
    for (const double e : r.energy.data()) CHECK(e >= 0.0);
}

TEST_CASE("overlap and non-overlap grids agree on shared frames") {
    const TimeSeries ts(oracle::random_signal(8192, 21), kFs);
    const auto w = make_window(WindowKind::Hann, 1024);
    const auto a = stft(ts, w, 1024, 1024);
    const auto b = stft(ts, w, 256, 1024);
    for (std::size_t m = 0; m < a.n_frames(); ++m) {
        for (std::size_t k = 0; k < a.n_bins(); ++k) CHECK(std::abs(a.values(m, k) - b.values(4 * m, k)) < 1e-12);
    }
}

TEST_CASE("time-shift covariance") {
    const std::size_t hop = 128, L = 512;
    auto x = oracle::random_signal(4096 + hop, 5);
    const std::vector<double> shifted(x.begin() + hop, x.end());
    const auto w = make_window(WindowKind::Hann, L);
    const auto a = stft(TimeSeries(x, kFs), w, hop, L);
    const auto b = stft(TimeSeries(shifted, kFs), w, hop, L);
    for (std::size_t m = 0; interior(m + 1, hop, L, x.size()); ++m) {
        for (std::size_t k = 0; k < a.n_bins(); ++k) CHECK(std::abs(a.values(m + 1, k) - b.values(m, k)) < 1e-9);
    }
}

TEST_CASE("grid export round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "tfmd_unit_tfr";
    std::filesystem::remove_all(dir);
    const TimeSeries ts(oracle::random_signal(2048, 8), kFs);
    const auto g = stft(ts, make_window(WindowKind::Hann, 256), 128, 256);
    write_tfgrid(dir / "g.tfg", g);
    const auto back = read_tfgrid(dir / "g.tfg");
    REQUIRE(back.n_frames() == g.n_frames());
    REQUIRE(back.n_bins() == g.n_bins());
    CHECK(back.hop == 128);
    CHECK(back.n_fft == 256);
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        CHECK(back.values.data()[i].real() == static_cast<float>(g.values.data()[i].real()));
        CHECK(back.values.data()[i].imag() == static_cast<float>(g.values.data()[i].imag()));
    }
    const auto s = spectrogram(g);
    write_spectrogram(dir / "s.spg", s);
    const auto sb = read_spectrogram(dir / "s.spg");
    REQUIRE(sb.energy.size() == s.energy.size());
    for (std::size_t i = 0; i < s.energy.size(); ++i) CHECK(sb.energy.data()[i] == static_cast<float>(s.energy.data()[i]));
    CHECK(sb.times_s == s.times_s);
}

TEST_CASE("reassignment operators: threshold and mask") {
    const TimeSeries ts(oracle::random_signal(4096, 2), kFs);
    const auto w = make_window(WindowKind::Hann, 512);
    CHECK_THROWS_AS(reassignment_operators(ts, w, 128, 512, 0.0), InvalidArgument);
    CHECK_THROWS_AS(reassignment_operators(ts, w, 128, 512, 1.0), InvalidArgument);
    const auto f = reassignment_operators(ts, w, 128, 512, 0.05);
    double peak = 0.0;
    for (const auto& v : f.grid.values.data()) peak = std::max(peak, std::abs(v));
    for (std::size_t m = 0; m < f.grid.n_frames(); ++m) {
        for (std::size_t k = 0; k < f.grid.n_bins(); ++k) {
            const bool above = std::abs(f.grid.values(m, k)) > 0.05 * peak;
            CHECK(static_cast<bool>(f.mask(m, k)) == above);
            if (above) {
                CHECK(std::isfinite(f.t_hat(m, k)));
                CHECK(std::isfinite(f.omega_hat(m, k)));
            } else {
                CHECK(f.t_hat(m, k) == f.grid.times_s[m]);
                CHECK(f.omega_hat(m, k) == doctest::Approx(kTwoPi * f.grid.freqs_hz[k]));
            }
        }
    }
}

TEST_CASE("reassignment: pure tone frequency") {
    const double f0 = 1234.5;  // 126.4 bins at N = 1024
    const std::size_t L = 1024, hop = 256, len = 8192;
    const TimeSeries ts(oracle::tone(len, kFs, f0, 1.0, 0.7), kFs);
    const double bin = kFs / L;

    // Truncated Gaussian (edge value 0.011): its sidelobes and the
    // negative-frequency image dominate far from the ridge, so the bound is
    // checked where the tone itself dominates the cell.
    SUBCASE("gaussian window, ridge mask") {
        const auto f = reassignment_operators(ts, make_window(WindowKind::Gaussian, L), hop, L, 0.25);
        std::size_t n = 0;
        for (std::size_t m = 0; interior(m, hop, L, len); ++m) {
            for (std::size_t k = 0; k < f.grid.n_bins(); ++k) {
                if (!f.mask(m, k)) continue;
                ++n;
                CHECK(std::abs(f.omega_hat(m, k) / kTwoPi - f0) < 0.05 * bin);
            }
        }
        CHECK(n > 20);
    }
    SUBCASE("hann window") {
        const auto f = reassignment_operators(ts, make_window(WindowKind::Hann, L), hop, L, 1e-3);
        for (std::size_t m = 0; interior(m, hop, L, len); ++m) {
            for (std::size_t k = 0; k < f.grid.n_bins(); ++k) {
                if (f.mask(m, k)) CHECK(std::abs(f.omega_hat(m, k) / kTwoPi - f0) < 0.05 * bin);
            }
        }
    }
    SUBCASE("default threshold, energy weighted") {
        const auto f = reassignment_operators(ts, make_window(WindowKind::Gaussian, L), hop, L, 1e-4);
        std::vector<double> err, wt;
        for (std::size_t m = 0; interior(m, hop, L, len); ++m) {
            for (std::size_t k = 0; k < f.grid.n_bins(); ++k) {
                if (!f.mask(m, k)) continue;
                err.push_back(std::abs(f.omega_hat(m, k) / kTwoPi - f0));
                wt.push_back(std::norm(f.grid.values(m, k)));
            }
        }
        CHECK(oracle::percentile(err, wt, 0.99) < 0.05 * bin);
    }
}

TEST_CASE("reassignment: impulse group delay") {
    const std::size_t len = 8192, n0 = 4000, hop = 256;
    std::vector<double> x(len, 0.0);
    x[n0] = 1.0;
    const TimeSeries ts(x, kFs);
    for (const auto kind : {WindowKind::Gaussian, WindowKind::Hann}) {
        const auto f = reassignment_operators(ts, make_window(kind, 1024), hop, 1024, 1e-4);
        std::size_t n = 0;
        for (std::size_t m = 0; m < f.grid.n_frames(); ++m) {
            for (std::size_t k = 0; k < f.grid.n_bins(); ++k) {
                if (!f.mask(m, k)) continue;
                ++n;
                CHECK(std::abs(f.t_hat(m, k) - n0 / kFs) < 0.05 * hop / kFs);
            }
        }
        CHECK(n > 0);
    }
}

TEST_CASE("reassignment: linear chirp") {
    const double rate = 2500.0;  // 0 -> 2 kHz over 0.8 s
    const std::size_t len = 8000, L = 1024, hop = 256;
    const TimeSeries ts(oracle::chirp(len, kFs, 0.0, rate), kFs);
    const auto f = reassignment_operators(ts, make_window(WindowKind::Gaussian, L), hop, L, 1e-4);

    std::vector<double> err, wt;
    std::vector<std::pair<double, double>> ridge;
    for (std::size_t m = 0; interior(m, hop, L, len); ++m) {
        std::size_t best = 0;
        for (std::size_t k = 0; k < f.grid.n_bins(); ++k) {
            if (std::abs(f.grid.values(m, k)) > std::abs(f.grid.values(m, best))) best = k;
            if (!f.mask(m, k)) continue;
            err.push_back(std::abs(f.omega_hat(m, k) / kTwoPi - rate * f.t_hat(m, k)));
            wt.push_back(std::norm(f.grid.values(m, k)));
        }
        ridge.emplace_back(f.t_hat(m, best), f.omega_hat(m, best) / kTwoPi);
    }
    CHECK(oracle::percentile(err, wt, 0.95) < kFs / L);

    // Sign convention: on an up-chirp the ridge frequency rises with time.
    std::sort(ridge.begin(), ridge.end());
    for (std::size_t i = 1; i < ridge.size(); ++i) CHECK(ridge[i].second > ridge[i - 1].second);
    const double slope = (ridge.back().second - ridge.front().second) / (ridge.back().first - ridge.front().first);
    CHECK(slope == doctest::Approx(rate).epsilon(0.02));

    // A down-chirp must give a falling ridge.
    const TimeSeries down(oracle::chirp(len, kFs, 2000.0, -rate), kFs);
    const auto fd = reassignment_operators(down, make_window(WindowKind::Gaussian, L), hop, L, 1e-4);
    std::vector<std::pair<double, double>> dr;
    for (std::size_t m = 0; interior(m, hop, L, len); ++m) {
        std::size_t best = 0;
        for (std::size_t k = 0; k < fd.grid.n_bins(); ++k) {
            if (std::abs(fd.grid.values(m, k)) > std::abs(fd.grid.values(m, best))) best = k;
        }
        dr.emplace_back(fd.t_hat(m, best), fd.omega_hat(m, best) / kTwoPi);
    }
    std::sort(dr.begin(), dr.end());
    for (std::size_t i = 1; i < dr.size(); ++i) CHECK(dr[i].second < dr[i - 1].second);
}

TEST_CASE("reassigned spectrogram") {
    const auto w = make_window(WindowKind::Hann, 512);
    const TimeSeries zeros(std::vector<double>(4096, 0.0), kFs);
    const auto rz = reassigned_spectrogram(zeros, w, 128, 512, 1e-4);
    for (const double e : rz.energy.data()) CHECK(e == 0.0);

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const TimeSeries ts(oracle::random_signal(4096, seed), kFs);
        const auto plain = spectrogram(stft(ts, w, 128, 512));
        const auto re = reassigned_spectrogram(ts, w, 128, 512, 1e-4);
        CHECK(re.n_frames() == plain.n_frames());
        CHECK(re.n_bins() == plain.n_bins());
        CHECK(std::abs(re.total_energy() - plain.total_energy()) / plain.total_energy() < 1e-9);
    }

    // Zero-padded analysis (N_fft = 8 L) so the plain marginal spans several bins.
    const TimeSeries tone(oracle::tone(8192, kFs, 1234.5, 1.0, 0.2), kFs);
    const auto w256 = make_window(WindowKind::Hann, 256);
    const auto plain = frequency_marginal(spectrogram(stft(tone, w256, 64, 2048)));
    const auto sharp = frequency_marginal(reassigned_spectrogram(tone, w256, 64, 2048, 1e-4));
    CHECK(half_energy_width(plain) >= 3 * half_energy_width(sharp));
}

TEST_CASE("synchrosqueezing") {
    const std::size_t L = 1024, hop = 256, len = 8192;
    const auto w = make_window(WindowKind::Hann, L);
    const TimeSeries zeros(std::vector<double>(len, 0.0), kFs);
    const auto tz = synchrosqueeze(zeros, w, hop, L, 1e-4);
    for (const auto& v : tz.values.data()) CHECK(v == cplx(0, 0));

    SUBCASE("masked coefficient sums are conserved per frame") {
        const TimeSeries ts(oracle::random_signal(len, 12), kFs);
        const auto f = reassignment_operators(ts, w, hop, L, 1e-2);
        const auto t = synchrosqueeze(ts, w, hop, L, 1e-2);
        REQUIRE(t.n_frames() == f.grid.n_frames());
        for (std::size_t m = 0; m < t.n_frames(); ++m) {
            cplx a{0, 0}, b{0, 0};
            double scale = 0.0;
            for (std::size_t k = 0; k < t.n_bins(); ++k) {
                a += t.values(m, k);
                if (f.mask(m, k)) b += f.grid.values(m, k);
                scale += std::abs(f.grid.values(m, k));
            }
            CHECK(std::abs(a - b) <= 1e-13 * scale);
        }
    }
    SUBCASE("tone energy concentrates within one bin") {
        const double f0 = 1234.5;
        const TimeSeries ts(oracle::tone(len, kFs, f0), kFs);
        const auto t = synchrosqueeze(ts, w, hop, L, 1e-4);
        const double k0 = f0 * L / kFs;
        for (std::size_t m = 0; interior(m, hop, L, len); ++m) {
            double near = 0.0, all = 0.0;
            for (std::size_t k = 0; k < t.n_bins(); ++k) {
                const double e = std::norm(t.values(m, k));
                all += e;
                if (std::abs(static_cast<double>(k) - k0) <= 1.0) near += e;
            }
            CHECK(near >= 0.95 * all);
        }
    }
}

TEST_CASE("synchrosqueezing inversion") {
    const std::size_t L = 1024, hop = 256, len = 8192;
    const auto w = make_window(WindowKind::Hann, L);
    const double c = (L - 1) / 2.0;
    auto rel_error = [&](const std::function<double(double)>& x_of_t) {
        std::vector<double> x(len);
        for (std::size_t n = 0; n < len; ++n) x[n] = x_of_t(n / kFs);
        const auto t = synchrosqueeze(TimeSeries(x, kFs), w, hop, L, 1e-4);
        const auto rec = reconstruct_from_sst(t, w);
        CHECK(rec.sample_rate_hz() == doctest::Approx(kFs / hop));
        double num = 0.0, den = 0.0;
        for (std::size_t m = 0; interior(m, hop, L, len); ++m) {
            const double ref = x_of_t((m * hop + c) / kFs);
            num += std::pow(rec[m] - ref, 2);
            den += ref * ref;
        }
        return std::sqrt(num / den);
    };
    CHECK(rel_error([](double t) { return std::cos(kTwoPi * 733.3 * t + 0.4); }) < 1e-2);
    CHECK(rel_error([](double t) {
              return std::cos(kTwoPi * 500.0 * t + 0.1) + 0.5 * std::cos(kTwoPi * 2100.0 * t + 1.3);
          }) < 5e-2);

    const TimeSeries zeros(std::vector<double>(len, 0.0), kFs);
    const auto rz = reconstruct_from_sst(synchrosqueeze(zeros, w, hop, L, 1e-4), w);
    for (const double v : rz.samples()) CHECK(v == 0.0);

    auto bad = w;
    bad.center_value = 0.0;
    CHECK_THROWS_AS(reconstruct_from_sst(synchrosqueeze(zeros, w, hop, L, 1e-4), bad), InvalidWindow);
    CHECK_THROWS_AS(reconstruct_from_sst(synchrosqueeze(zeros, w, hop, L, 1e-4), make_window(WindowKind::Hann, 512)),
                    InvalidArgument);
}

TEST_CASE("transform dispatcher") {
    CHECK(parse_method("stft-or") == Method::StftOR);
    CHECK(parse_method("STFT_O") == Method::StftO);
    CHECK(parse_method("STFT") == Method::Stft);
    CHECK_THROWS_AS(parse_method("stft-x"), InvalidArgument);
    for (const auto m : kAllMethods) CHECK(parse_method(method_slug(m)) == m);

    const TimeSeries tone(oracle::tone(8192, kFs, 1234.5), kFs);
    const auto plain = transform(tone, Method::Stft);
    const auto over = transform(tone, Method::StftO);
    CHECK(over.n_frames() == 4 * plain.n_frames());

    const auto re = transform(tone, Method::StftR);
    CHECK(re.n_frames() == plain.n_frames());
    CHECK(re.freqs_hz == plain.freqs_hz);
    CHECK(re.times_s == plain.times_s);
    CHECK(peak_fraction(frequency_marginal(re)) > peak_fraction(frequency_marginal(plain)));

    const TimeSeries zeros(std::vector<double>(8192, 0.0), kFs);
    const TimeSeries noise(oracle::random_signal(8192, 77), kFs);
    for (const auto m : kAllMethods) {
        CAPTURE(method_code(m));
        const auto sz = transform(zeros, m);
        for (const double e : sz.energy.data()) CHECK(e == 0.0);
        CHECK(transform(noise, m).energy == transform(noise, m).energy);
    }
}
