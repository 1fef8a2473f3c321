#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tfmd::dsp {

enum class WindowKind { Hann, Gaussian, Rectangular };

std::string to_string(WindowKind kind);
WindowKind window_kind_from_string(const std::string& name);

/// Analysis window with the two auxiliary windows needed by reassignment.
///
/// With c = (L-1)/2:
///   time_weighted[n] = (n - c) * coefficients[n]
///   derivative[n]    = d/dn of the window formula, evaluated at integer n
/// `center_value` is the window formula evaluated at the (possibly
/// half-integer) center c; SST inversion divides by it.
struct Window {
    WindowKind kind;
    std::vector<double> coefficients;
    std::vector<double> derivative;
    std::vector<double> time_weighted;
    double center_value;

    std::size_t length() const noexcept { return coefficients.size(); }
    double center() const noexcept { return (static_cast<double>(length()) - 1.0) / 2.0; }
};

/// Hann: 0.5 - 0.5 cos(2 pi n / (L-1)).
/// Gaussian: exp(-((n-c)/sigma)^2 / 2), sigma = L/6.
/// Rectangular: ones.
/// Throws InvalidArgument when length < 2.
Window make_window(WindowKind kind, std::size_t length);

}  // namespace tfmd::dsp
