#pragma once

#include <stdexcept>
#include <string>

namespace tfmd {

// Every error the library raises derives from Error and carries a stable,
// machine-readable kind string (used by the CLI's JSON error output).
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& m) : Error("invalid-argument", m) {}
};

struct InvalidWindow : Error {
    explicit InvalidWindow(const std::string& m) : Error("invalid-window", m) {}
};

struct IoError : Error {
    explicit IoError(const std::string& m) : Error("io-error", m) {}
};

struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& m) : Error("shape-mismatch", m) {}
};

struct NonFinite : Error {
    explicit NonFinite(const std::string& m) : Error("non-finite", m) {}
};

struct DivergedTraining : Error {
    explicit DivergedTraining(const std::string& m) : Error("diverged-training", m) {}
};

}  // namespace tfmd
