#include "tfmd/dsp/window.hpp"

#include "tfmd/common/error.hpp"

#include <cmath>
#include <numbers>

namespace tfmd::dsp {

std::string to_string(WindowKind kind) {
    switch (kind) {
        case WindowKind::Hann: return "hann";
        case WindowKind::Gaussian: return "gaussian";
        case WindowKind::Rectangular: return "rectangular";
    }
    return "unknown";
}

WindowKind window_kind_from_string(const std::string& name) {
    if (name == "hann") return WindowKind::Hann;
    if (name == "gaussian") return WindowKind::Gaussian;
    if (name == "rectangular") return WindowKind::Rectangular;
    throw InvalidArgument("unknown window kind: " + name);
}

Window make_window(WindowKind kind, std::size_t length) {
    if (length < 2) throw InvalidArgument("window length must be at least 2");

    const double L = static_cast<double>(length);
    const double c = (L - 1.0) / 2.0;
    Window w{kind, std::vector<double>(length), std::vector<double>(length), std::vector<double>(length), 1.0};

    // Formulas are written in terms of (n - c) so the coefficients are
    // exactly symmetric about the center.
    for (std::size_t i = 0; i < length; ++i) {
        const double u = static_cast<double>(i) - c;
        switch (kind) {
            case WindowKind::Hann: {
                const double omega = 2.0 * std::numbers::pi / (L - 1.0);
                w.coefficients[i] = 0.5 + 0.5 * std::cos(omega * u);
                w.derivative[i] = -0.5 * omega * std::sin(omega * u);
                break;
            }
            case WindowKind::Gaussian: {
                const double sigma = L / 6.0;
                const double g = std::exp(-0.5 * (u / sigma) * (u / sigma));
                w.coefficients[i] = g;
                w.derivative[i] = -u / (sigma * sigma) * g;
                break;
            }
            case WindowKind::Rectangular:
                w.coefficients[i] = 1.0;
                w.derivative[i] = 0.0;
                break;
        }
        w.time_weighted[i] = u * w.coefficients[i];
    }
    // All three formulas peak at the center with value 1.
    w.center_value = 1.0;
    return w;
}

}  // namespace tfmd::dsp
