#include "tfmd/motorsim/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace tfmd::motorsim {

std::vector<Component> signature_components(FaultClass cls, int load_pct, const MotorSpec& spec) {
    require_valid_load(load_pct);
    const double f = spec.supply_hz;
    const double s = spec.slip(load_pct);
    const double fr = spec.rotor_hz(load_pct);
    std::vector<Component> out;
    switch (cls) {
        case FaultClass::Healthy:
            out.push_back({5.0 * f, spec.healthy_harmonic_db});
            out.push_back({7.0 * f, spec.healthy_harmonic_db});
            break;
        case FaultClass::BearingMisalignment:
            out.push_back({f - fr, spec.misalignment_db});
            out.push_back({f + fr, spec.misalignment_db});
            break;
        case FaultClass::StatorInterTurn:
            out.push_back({3.0 * f, spec.stator_third_db});
            out.push_back({5.0 * f, spec.stator_fifth_db});
            break;
        case FaultClass::BrokenRotorBar:
            for (int k = 1; k <= 2; ++k) {
                out.push_back({f * (1.0 - 2.0 * k * s), spec.broken_bar_db});
                out.push_back({f * (1.0 + 2.0 * k * s), spec.broken_bar_db});
            }
            break;
        case FaultClass::OuterBearingDefect: {
            const double bpfo = spec.bpfo_ratio * fr;
            for (int m = 1; m <= 2; ++m) {
                out.push_back({std::abs(f - m * bpfo), spec.outer_race_db});
                out.push_back({f + m * bpfo, spec.outer_race_db});
            }
            break;
        }
    }
    return out;
}

dsp::TimeSeries synth_signal(FaultClass cls, int load_pct, const MotorSpec& spec, std::uint64_t seed) {
    const auto components = signature_components(cls, load_pct, spec);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> jitter_dist(1.0 - spec.amplitude_jitter, 1.0 + spec.amplitude_jitter);

    const double base = spec.amplitude(load_pct);
    const double two_pi_dt = 2.0 * std::numbers::pi / spec.fs_hz;
    std::vector<double> x(spec.segment_len, 0.0);

    const auto add_tone = [&](double freq_hz, double amplitude) {
        const double a = amplitude * jitter_dist(rng);
        const double phi = phase_dist(rng);
        for (std::size_t n = 0; n < x.size(); ++n) x[n] += a * std::sin(two_pi_dt * freq_hz * static_cast<double>(n) + phi);
    };

    add_tone(spec.supply_hz, base);
    for (const auto& c : components) add_tone(c.freq_hz, base * spec.signature_gain * std::pow(10.0, c.level_db / 20.0));

    // Noise power is referenced to the nominal fundamental power A^2 / 2.
    const double noise_rms = base / std::numbers::sqrt2 * std::pow(10.0, -spec.snr_db / 20.0);
    std::normal_distribution<double> noise(0.0, noise_rms);
    for (double& v : x) v += noise(rng);
    return dsp::TimeSeries(std::move(x), spec.fs_hz);
}

}  // namespace tfmd::motorsim
