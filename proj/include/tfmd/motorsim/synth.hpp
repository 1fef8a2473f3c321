#pragma once

#include "tfmd/dsp/time_series.hpp"
#include "tfmd/motorsim/motor_spec.hpp"

#include <cstdint>
#include <vector>

namespace tfmd::motorsim {

struct Component {
    double freq_hz;
    double level_db;  // relative to the fundamental
};

/// Deterministic components injected for a class at a load, excluding the
/// fundamental itself.
std::vector<Component> signature_components(FaultClass cls, int load_pct, const MotorSpec& spec);

/// A(load) sin(2 pi f_supply t + phi) plus the class signature, each
/// component with a uniform random phase and +/- jitter on its amplitude,
/// plus white Gaussian noise at spec.snr_db. Fully determined by
/// (cls, load, spec, seed).
dsp::TimeSeries synth_signal(FaultClass cls, int load_pct, const MotorSpec& spec, std::uint64_t seed);

}  // namespace tfmd::motorsim
