#include "tfmd/dsp/time_series.hpp"

#include "tfmd/common/blob_io.hpp"
#include "tfmd/common/error.hpp"

#include <cmath>

namespace tfmd::dsp {

TimeSeries::TimeSeries(std::vector<double> samples, double sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
    if (samples_.empty()) throw InvalidArgument("time series must contain at least one sample");
    if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
        throw InvalidArgument("sample rate must be positive and finite");
    }
    for (double v : samples_) {
        if (!std::isfinite(v)) throw InvalidArgument("time series contains a non-finite sample");
    }
}

double energy(const TimeSeries& ts) {
    double e = 0.0;
    for (double v : ts.samples()) e += v * v;
    return e;
}

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
    return std::filesystem::path(stem.string() + suffix);
}

}  // namespace

void write_time_series(const std::filesystem::path& stem, const TimeSeries& ts, const SignalMetadata& meta) {
    std::vector<float> f32(ts.samples().begin(), ts.samples().end());
    write_f32_le(with_suffix(stem, ".f32"), f32);

    nlohmann::json side = {{"sample_rate_hz", ts.sample_rate_hz()}, {"n_samples", ts.size()}};
    if (meta.label) side["label"] = *meta.label;
    if (meta.load) side["load"] = *meta.load;
    if (meta.seed) side["seed"] = *meta.seed;
    write_json(with_suffix(stem, ".json"), side);
}

LoadedSignal read_time_series(const std::filesystem::path& stem) {
    const auto side = read_json(with_suffix(stem, ".json"));
    const auto raw = read_f32_le(with_suffix(stem, ".f32"));
    const auto n = side.at("n_samples").get<std::size_t>();
    if (raw.size() != n) throw IoError("sample count mismatch for " + stem.string());

    SignalMetadata meta;
    if (side.contains("label")) meta.label = side["label"].get<std::string>();
    if (side.contains("load")) meta.load = side["load"].get<int>();
    if (side.contains("seed")) meta.seed = side["seed"].get<unsigned long long>();
    return {TimeSeries(std::vector<double>(raw.begin(), raw.end()), side.at("sample_rate_hz").get<double>()),
            meta};
}

}  // namespace tfmd::dsp
