#include "tfmd/tfr/transform.hpp"

#include "tfmd/common/error.hpp"
#include "tfmd/tfr/reassignment.hpp"
#include "tfmd/tfr/stft.hpp"
#include "tfmd/tfr/synchrosqueeze.hpp"

#include <algorithm>
#include <cctype>

namespace tfmd::tfr {

std::string method_code(Method m) {
    switch (m) {
        case Method::Stft: return "STFT";
        case Method::StftO: return "STFT-O";
        case Method::StftR: return "STFT-R";
        case Method::StftOR: return "STFT-OR";
        case Method::StftS: return "STFT-S";
    }
    throw InvalidArgument("unknown method");
}

std::string method_slug(Method m) {
    std::string s = method_code(m);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return s;
}

Method parse_method(const std::string& text) {
    std::string norm;
    for (unsigned char ch : text) norm.push_back(ch == '_' ? '-' : static_cast<char>(std::toupper(ch)));
    for (Method m : kAllMethods) {
        if (method_code(m) == norm) return m;
    }
    throw InvalidArgument("unknown method: " + text);
}

bool uses_overlap(Method m) { return m != Method::Stft && m != Method::StftR; }

Spectrogram transform(const dsp::TimeSeries& ts, Method method, const TransformConfig& cfg) {
    const auto window = dsp::make_window(cfg.window, cfg.window_len);
    const std::size_t hop = uses_overlap(method) ? cfg.hop_overlap : cfg.hop_nonoverlap;
    switch (method) {
        case Method::Stft:
        case Method::StftO: return spectrogram(stft(ts, window, hop, cfg.n_fft));
        case Method::StftR:
        case Method::StftOR: return reassigned_spectrogram(ts, window, hop, cfg.n_fft, cfg.threshold);
        case Method::StftS: return spectrogram(synchrosqueeze(ts, window, hop, cfg.n_fft, cfg.threshold));
    }
    throw InvalidArgument("unknown method");
}

}  // namespace tfmd::tfr
