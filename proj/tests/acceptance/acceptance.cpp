// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Criteria 6-9 drive the CLI binary.

#include "oracles.hpp"

#include "tfmd/common/blob_io.hpp"
#include "tfmd/cnn/network.hpp"
#include "tfmd/cnn/train.hpp"
#include "tfmd/dsp/fft.hpp"
#include "tfmd/dsp/framing.hpp"
#include "tfmd/dsp/window.hpp"
#include "tfmd/pipeline/report.hpp"
#include "tfmd/tfr/reassignment.hpp"
#include "tfmd/tfr/stft.hpp"
#include "tfmd/tfr/synchrosqueeze.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>

using namespace tfmd;
namespace fs = std::filesystem;

namespace {

constexpr double kFs = 10000.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;  // 0: no time budget
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

bool interior(std::size_t m, std::size_t hop, std::size_t L, std::size_t len) { return m * hop + L <= len; }

Outcome fft_vs_dft() {
    double worst = 0.0;
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (std::size_t n = 8; n <= 1024; n *= 2) {
        for (int rep = 0; rep < 100; ++rep) {
            std::vector<std::complex<double>> x(n);
            for (auto& v : x) v = {nd(rng), nd(rng)};
            const auto got = dsp::fft(x);
            const auto ref = oracle::dft(x);
            for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(got[k] - ref[k]));
        }
    }
    return {worst < 1e-9, "max abs error " + fmt("%.3g", worst) + " over sizes 8-1024, 100 cases each"};
}

Outcome stft_parseval() {
    const std::size_t L = 1024, hop = 256, len = 8192;
    const auto w = dsp::make_window(dsp::WindowKind::Hann, L);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto x = oracle::random_signal(len, seed);
        const auto g = tfr::stft(dsp::TimeSeries(x, kFs), w, hop, L);
        double grid = 0.0, direct = 0.0;
        for (std::size_t m = 0; interior(m, hop, L, len); ++m) {
            for (std::size_t k = 0; k < g.n_bins(); ++k) {
                const double e = std::norm(g.values(m, k));
                grid += (k == 0 || k == L / 2) ? e : 2.0 * e;
            }
            for (std::size_t i = 0; i < L; ++i) direct += std::pow(x[m * hop + i] * w.coefficients[i], 2);
        }
        worst = std::max(worst, std::abs(grid / L - direct) / direct);
    }
    return {worst < 1e-6, "windowed-energy identity, max relative error " + fmt("%.3g", worst)};
}

Outcome reassignment_oracle() {
    const std::size_t L = 1024, hop = 256;
    const double bin = kFs / L;
    const auto gauss = dsp::make_window(dsp::WindowKind::Gaussian, L);
    const auto hann = dsp::make_window(dsp::WindowKind::Hann, L);
    std::ostringstream d;
    bool ok = true;

    // Chirp: 0 -> 2 kHz over 0.8 s.
    const double rate = 2500.0;
    const std::size_t clen = 8000;
    const auto chirp_field =
        tfr::reassignment_operators(dsp::TimeSeries(oracle::chirp(clen, kFs, 0.0, rate), kFs), gauss, hop, L, 1e-4);
    std::vector<double> err, wt;
    std::vector<std::pair<double, double>> ridge;
    for (std::size_t m = 0; interior(m, hop, L, clen); ++m) {
        std::size_t best = 0;
        for (std::size_t k = 0; k < chirp_field.grid.n_bins(); ++k) {
            if (std::abs(chirp_field.grid.values(m, k)) > std::abs(chirp_field.grid.values(m, best))) best = k;
            if (!chirp_field.mask(m, k)) continue;
            err.push_back(std::abs(chirp_field.omega_hat(m, k) / kTwoPi - rate * chirp_field.t_hat(m, k)));
            wt.push_back(std::norm(chirp_field.grid.values(m, k)));
        }
        ridge.emplace_back(chirp_field.t_hat(m, best), chirp_field.omega_hat(m, best) / kTwoPi);
    }
    const double p95 = oracle::percentile(err, wt, 0.95);
    ok &= p95 < bin;
    std::sort(ridge.begin(), ridge.end());
    bool rising = true;
    for (std::size_t i = 1; i < ridge.size(); ++i) rising &= ridge[i].second > ridge[i - 1].second;
    ok &= rising;
    d << "chirp p95 " << fmt("%.3f", p95 / bin) << " bin, ridge " << (rising ? "rising" : "NOT rising");

    // Pure tone between bins; Gaussian window with the ridge mask, Hann at the default threshold.
    const double f0 = 1234.5;
    const std::size_t tlen = 8192;
    const dsp::TimeSeries tone(oracle::tone(tlen, kFs, f0, 1.0, 0.7), kFs);
    double tone_err = 0.0;
    for (const auto& [win, thr] : {std::pair{&gauss, 0.25}, std::pair{&hann, 1e-4}}) {
        const auto f = tfr::reassignment_operators(tone, *win, hop, L, thr);
        for (std::size_t m = 0; interior(m, hop, L, tlen); ++m) {
            for (std::size_t k = 0; k < f.grid.n_bins(); ++k) {
                if (f.mask(m, k)) tone_err = std::max(tone_err, std::abs(f.omega_hat(m, k) / kTwoPi - f0));
            }
        }
    }
    ok &= tone_err < 0.05 * bin;
    d << "; tone max " << fmt("%.4f", tone_err / bin) << " bin";

    // Impulse group delay.
    std::vector<double> x(tlen, 0.0);
    const std::size_t n0 = 4000;
    x[n0] = 1.0;
    double imp_err = 0.0;
    for (const auto* win : {&gauss, &hann}) {
        const auto f = tfr::reassignment_operators(dsp::TimeSeries(x, kFs), *win, hop, L, 1e-4);
        for (std::size_t m = 0; m < f.grid.n_frames(); ++m) {
            for (std::size_t k = 0; k < f.grid.n_bins(); ++k) {
                if (f.mask(m, k)) imp_err = std::max(imp_err, std::abs(f.t_hat(m, k) - n0 / kFs));
            }
        }
    }
    ok &= imp_err < 0.05 * hop / kFs;
    d << "; impulse max " << fmt("%.4f", imp_err * kFs / hop) << " hop";
    return {ok, d.str()};
}

Outcome synchrosqueezing() {
    const std::size_t L = 1024, hop = 256, len = 8192;
    const auto w = dsp::make_window(dsp::WindowKind::Hann, L);
    std::ostringstream d;
    bool ok = true;

    const dsp::TimeSeries noise(oracle::random_signal(len, 12), kFs);
    const auto field = tfr::reassignment_operators(noise, w, hop, L, 1e-2);
    const auto t = tfr::synchrosqueeze(noise, w, hop, L, 1e-2);
    double worst_sum = 0.0;
    for (std::size_t m = 0; m < t.n_frames(); ++m) {
        std::complex<double> a{0, 0}, b{0, 0};
        double scale = 0.0;
        for (std::size_t k = 0; k < t.n_bins(); ++k) {
            a += t.values(m, k);
            if (field.mask(m, k)) b += field.grid.values(m, k);
            scale += std::abs(field.grid.values(m, k));
        }
        worst_sum = std::max(worst_sum, std::abs(a - b) / scale);
    }
    ok &= worst_sum < 1e-12;
    d << "sum conservation " << fmt("%.2g", worst_sum);

    const double c = (L - 1) / 2.0;
    const auto two_tone = [](double tt) {
        return std::cos(kTwoPi * 500.0 * tt + 0.1) + 0.5 * std::cos(kTwoPi * 2100.0 * tt + 1.3);
    };
    std::vector<double> x(len);
    for (std::size_t n = 0; n < len; ++n) x[n] = two_tone(n / kFs);
    const auto rec = tfr::reconstruct_from_sst(tfr::synchrosqueeze(dsp::TimeSeries(x, kFs), w, hop, L, 1e-4), w);
    double num = 0.0, den = 0.0;
    for (std::size_t m = 0; interior(m, hop, L, len); ++m) {
        const double ref = two_tone((m * hop + c) / kFs);
        num += std::pow(rec[m] - ref, 2);
        den += ref * ref;
    }
    const double rel = std::sqrt(num / den);
    ok &= rel < 5e-2;
    d << "; two-tone L2 " << fmt("%.2g", rel);

    const double f0 = 1234.5;
    const auto ts = tfr::synchrosqueeze(dsp::TimeSeries(oracle::tone(len, kFs, f0), kFs), w, hop, L, 1e-4);
    const double k0 = f0 * L / kFs;
    double worst_frac = 1.0;
    for (std::size_t m = 0; interior(m, hop, L, len); ++m) {
        double near = 0.0, all = 0.0;
        for (std::size_t k = 0; k < ts.n_bins(); ++k) {
            const double e = std::norm(ts.values(m, k));
            all += e;
            if (std::abs(static_cast<double>(k) - k0) <= 1.0) near += e;
        }
        worst_frac = std::min(worst_frac, near / all);
    }
    ok &= worst_frac >= 0.95;
    d << "; tone energy within 1 bin >= " << fmt("%.4f", worst_frac);
    return {ok, d.str()};
}

Outcome cnn_gradients() {
    cnn::Architecture a;
    a.in_height = 8;
    a.in_width = 8;
    a.num_classes = 2;
    a.layers = {{cnn::LayerKind::Conv2D, 3, 4, 0}, {cnn::LayerKind::ReLU}, {cnn::LayerKind::MaxPool},
                {cnn::LayerKind::Conv2D, 3, 3, 0}, {cnn::LayerKind::ReLU}, {cnn::LayerKind::MaxPool},
                {cnn::LayerKind::Flatten},         {cnn::LayerKind::Dense, 0, 0, 6}, {cnn::LayerKind::ReLU},
                {cnn::LayerKind::Dense, 0, 0, 2},  {cnn::LayerKind::Softmax}};
    cnn::Network<double> net(a);
    net.initialize(17);
    auto theta = net.flat_parameters();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    for (auto& v : theta) v += u(rng);
    net.set_flat_parameters(theta);

    cnn::Tensor<double> batch({4, 3, 8, 8});
    std::uniform_real_distribution<double> px(0.0, 1.0);
    for (auto& v : batch.data) v = px(rng);
    const std::vector<int> labels{0, 1, 1, 0};
    cnn::loss_and_grad(net, batch, labels);
    std::vector<double> analytic;
    for (const auto& p : net.parameters()) analytic.insert(analytic.end(), p.grad.begin(), p.grad.end());

    const double eps = 1e-4;
    double worst = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        auto t = theta;
        t[i] = theta[i] + eps;
        net.set_flat_parameters(t);
        const double up = cnn::cross_entropy(net.forward(batch), labels);
        t[i] = theta[i] - eps;
        net.set_flat_parameters(t);
        const double down = cnn::cross_entropy(net.forward(batch), labels);
        const double numeric = (up - down) / (2 * eps);
        worst = std::max(worst, std::abs(numeric - analytic[i]) /
                                    std::max({std::abs(numeric), std::abs(analytic[i]), 1e-8}));
    }
    return {worst < 1e-4, std::to_string(theta.size()) + " parameters over conv/relu/pool/flatten/dense, max relative error " +
                              fmt("%.2g", worst)};
}

// Shared state for the end-to-end criteria.
struct EndToEnd {
    fs::path cli;
    fs::path work;
    bool ran = false;
    bool run_ok = false;
    double first_run_s = 0.0;
    std::string error;
};

int run_cli(const EndToEnd& e, const fs::path& out) {
    fs::remove_all(out);
    const std::string cmd = "\"" + e.cli.string() + "\" run-all --out \"" + out.string() + "\" > \"" +
                            (out.string() + ".stdout") + "\" 2> \"" + (out.string() + ".stderr") + "\"";
    return std::system(cmd.c_str());
}

void ensure_runs(EndToEnd& e) {
    if (e.ran) return;
    e.ran = true;
    fs::create_directories(e.work);
    const auto t0 = std::chrono::steady_clock::now();
    const int rc1 = run_cli(e, e.work / "run1");
    e.first_run_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int rc2 = run_cli(e, e.work / "run2");
    e.run_ok = rc1 == 0 && rc2 == 0;
    if (!e.run_ok) e.error = "run-all exit codes " + std::to_string(rc1) + ", " + std::to_string(rc2);
}

Outcome determinism(EndToEnd& e) {
    ensure_runs(e);
    if (!e.run_ok) return {false, e.error};
    const auto a = e.work / "run1", b = e.work / "run2";
    std::size_t compared = 0, pngs = 0, ckpts = 0, reports = 0;
    std::vector<std::string> diffs;
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), a);
        const auto ext = rel.extension().string();
        const bool is_report = rel.filename() == "eval_report.json";
        if (ext != ".png" && ext != ".ckpt" && !is_report) continue;
        ++compared;
        pngs += ext == ".png";
        ckpts += ext == ".ckpt";
        reports += is_report;
        if (!fs::exists(b / rel) || read_text(entry.path()) != read_text(b / rel)) diffs.push_back(rel.string());
    }
    std::ostringstream d;
    d << compared << " files (" << pngs << " PNG, " << ckpts << " checkpoints, " << reports << " reports)";
    if (!diffs.empty()) d << ", " << diffs.size() << " differ, first " << diffs.front();
    return {diffs.empty() && pngs == 2500 && ckpts == 50 && reports == 5, d.str()};
}

std::vector<pipeline::EvalReport> load_reports(const fs::path& run) {
    std::vector<pipeline::EvalReport> out;
    for (const std::string slug : {"stft", "stft-o", "stft-r", "stft-or", "stft-s"}) {
        const auto p = run / "reports" / slug / "eval_report.json";
        if (fs::exists(p)) out.push_back(pipeline::eval_report_from_json(read_json(p)));
    }
    return out;
}

Outcome desk_accuracy(EndToEnd& e) {
    ensure_runs(e);
    if (!e.run_ok) return {false, e.error};
    const auto reports = load_reports(e.work / "run1");
    std::map<std::string, double> mean;
    std::ostringstream d;
    for (const auto& r : reports) {
        mean[r.method] = r.mean_accuracy();
        d << r.method << " " << fmt("%.4f", r.mean_accuracy()) << " ";
    }
    bool ok = reports.size() == 5;
    const auto at_least = [&](const std::string& m, double thr) { return mean.contains(m) && mean[m] >= thr; };
    ok &= at_least("STFT-O", 0.90) && at_least("STFT", 0.85) && at_least("STFT-R", 0.85) && at_least("STFT-OR", 0.85);
    const bool ordering = mean["STFT-O"] >= mean["STFT-S"];
    const bool in_budget = e.first_run_s < 15 * 60;
    ok &= in_budget;
    d << "| STFT-O >= STFT-S " << (ordering ? "yes" : "no") << " (reported only) | run-all "
      << fmt("%.0f", e.first_run_s) << " s on " << std::thread::hardware_concurrency() << " hardware threads"
      << (in_budget ? "" : ", over the 900 s budget");
    return {ok, d.str()};
}

Outcome healthy_recall(EndToEnd& e) {
    ensure_runs(e);
    if (!e.run_ok) return {false, e.error};
    const auto reports = load_reports(e.work / "run1");
    if (reports.empty()) return {false, "no reports"};
    const auto rows = pipeline::compare_methods(reports);
    const auto it = std::find_if(reports.begin(), reports.end(),
                                 [&](const pipeline::EvalReport& r) { return r.method == rows.front().method; });
    const double recall = pipeline::recall(it->confusion)[0];
    return {recall >= 0.95, "best method " + it->method + ", healthy recall " + fmt("%.4f", recall)};
}

Outcome separability(EndToEnd& e) {
    ensure_runs(e);
    if (!e.run_ok) return {false, e.error};
    const auto sep = read_json(e.work / "run1" / "separability.json");
    std::ostringstream d;
    bool ok = false, found = false;
    for (const auto& r : sep) {
        const std::string method = r.at("method");
        const double min_r = r.at("min_ratio");
        d << method << " min r " << fmt("%.3f", min_r) << " ";
        if (method == "STFT") {
            found = true;
            ok = true;
            for (const auto& p : r.at("pairs")) ok &= p.at("ratio").get<double>() > 1.0;
        }
    }
    d << "(gate: STFT, all pairs at full load)";
    return {found && ok, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    EndToEnd e2e;
    std::string cli_path, work_dir;
    std::vector<int> only;
    app.add_option("--cli", cli_path, "Path to the tfmd CLI binary")->required();
    app.add_option("--work", work_dir, "Scratch directory for the end-to-end runs")->required();
    app.add_option("--only", only, "Run only these criteria");
    CLI11_PARSE(app, argc, argv);
    e2e.cli = fs::absolute(cli_path);
    e2e.work = fs::absolute(work_dir);

    const std::vector<Criterion> criteria{
        {1, "FFT matches naive DFT", 10, fft_vs_dft},
        {2, "STFT Parseval", 5, stft_parseval},
        {3, "reassignment oracle", 30, reassignment_oracle},
        {4, "synchrosqueezing", 30, synchrosqueezing},
        {5, "CNN gradients", 60, cnn_gradients},
        {6, "run-all determinism", 0, [&] { return determinism(e2e); }},
        {7, "desk-scale accuracy and runtime", 0, [&] { return desk_accuracy(e2e); }},
        {8, "healthy recall of best method", 0, [&] { return healthy_recall(e2e); }},
        {9, "class separability at full load", 0, [&] { return separability(e2e); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && dt >= c.budget_s) {
            o.pass = false;
            o.detail += "; over the " + fmt("%.0f", c.budget_s) + " s budget";
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << ", "
                  << fmt("%.1f", dt) << " s): " << o.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
