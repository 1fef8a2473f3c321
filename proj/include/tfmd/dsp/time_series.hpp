#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tfmd::dsp {

/// Uniformly sampled, real-valued signal. Construction validates that the
/// signal is non-empty, finite and has a positive sample rate.
class TimeSeries {
public:
    TimeSeries(std::vector<double> samples, double sample_rate_hz);

    const std::vector<double>& samples() const noexcept { return samples_; }
    double sample_rate_hz() const noexcept { return sample_rate_hz_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double operator[](std::size_t i) const { return samples_[i]; }

private:
    std::vector<double> samples_;
    double sample_rate_hz_;
};

/// Sum of squared samples.
double energy(const TimeSeries& ts);

// Optional metadata stored next to a signal in its JSON sidecar.
struct SignalMetadata {
    std::optional<std::string> label;
    std::optional<int> load;
    std::optional<unsigned long long> seed;
};

// Writes `<stem>.f32` (little-endian float32 samples) and `<stem>.json`
// ({sample_rate_hz, n_samples, label?, load?, seed?}).
void write_time_series(const std::filesystem::path& stem, const TimeSeries& ts,
                       const SignalMetadata& meta = {});

struct LoadedSignal {
    TimeSeries series;
    SignalMetadata meta;
};

LoadedSignal read_time_series(const std::filesystem::path& stem);

}  // namespace tfmd::dsp
