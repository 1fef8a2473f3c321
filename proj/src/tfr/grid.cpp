#include "tfmd/tfr/grid.hpp"

#include "tfmd/common/blob_io.hpp"
#include "tfmd/common/error.hpp"

#include <numeric>

namespace tfmd::tfr {

double Spectrogram::total_energy() const {
    return std::accumulate(energy.data().begin(), energy.data().end(), 0.0);
}

Spectrogram spectrogram(const TFGrid& g) {
    Spectrogram s;
    s.energy = Matrix<double>(g.n_frames(), g.n_bins());
    for (std::size_t i = 0; i < g.values.size(); ++i) s.energy.data()[i] = std::norm(g.values.data()[i]);
    s.times_s = g.times_s;
    s.freqs_hz = g.freqs_hz;
    s.sample_rate_hz = g.sample_rate_hz;
    s.window_len = g.window_len;
    s.hop = g.hop;
    s.n_fft = g.n_fft;
    return s;
}

namespace {

template <class G>
nlohmann::json axes_header(const G& g, const char* kind) {
    return {{"kind", kind},
            {"n_frames", g.times_s.size()},
            {"n_bins", g.freqs_hz.size()},
            {"sample_rate_hz", g.sample_rate_hz},
            {"window_len", g.window_len},
            {"hop", g.hop},
            {"n_fft", g.n_fft},
            {"times_s", g.times_s},
            {"freqs_hz", g.freqs_hz}};
}

template <class G>
void read_axes(const nlohmann::json& h, G& g, const char* kind) {
    if (h.value("kind", std::string{}) != kind) throw IoError(std::string("expected a ") + kind + " file");
    g.times_s = h.at("times_s").get<std::vector<double>>();
    g.freqs_hz = h.at("freqs_hz").get<std::vector<double>>();
    g.sample_rate_hz = h.at("sample_rate_hz").get<double>();
    g.window_len = h.at("window_len").get<std::size_t>();
    g.hop = h.at("hop").get<std::size_t>();
    g.n_fft = h.at("n_fft").get<std::size_t>();
}

}  // namespace

void write_spectrogram(const std::filesystem::path& path, const Spectrogram& s) {
    std::vector<float> payload(s.energy.data().begin(), s.energy.data().end());
    write_header_blob(path, axes_header(s, "spectrogram"), payload);
}

Spectrogram read_spectrogram(const std::filesystem::path& path) {
    auto blob = read_header_blob(path);
    Spectrogram s;
    read_axes(blob.header, s, "spectrogram");
    s.energy = Matrix<double>(s.times_s.size(), s.freqs_hz.size());
    if (blob.payload.size() != s.energy.size()) throw IoError("spectrogram payload has wrong size");
    std::copy(blob.payload.begin(), blob.payload.end(), s.energy.data().begin());
    return s;
}

void write_tfgrid(const std::filesystem::path& path, const TFGrid& g) {
    std::vector<float> payload;
    payload.reserve(g.values.size() * 2);
    for (const auto& v : g.values.data()) {
        payload.push_back(static_cast<float>(v.real()));
        payload.push_back(static_cast<float>(v.imag()));
    }
    write_header_blob(path, axes_header(g, "tfgrid"), payload);
}

TFGrid read_tfgrid(const std::filesystem::path& path) {
    auto blob = read_header_blob(path);
    TFGrid g;
    read_axes(blob.header, g, "tfgrid");
    g.values = Matrix<cplx>(g.times_s.size(), g.freqs_hz.size());
    if (blob.payload.size() != g.values.size() * 2) throw IoError("tfgrid payload has wrong size");
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        g.values.data()[i] = cplx(blob.payload[2 * i], blob.payload[2 * i + 1]);
    }
    return g;
}

}  // namespace tfmd::tfr
