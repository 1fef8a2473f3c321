#pragma once

#include <complex>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace tfmd {

/// Container used for spectrogram, TF-grid and checkpoint files: a single
/// line of compact JSON terminated by '\n', immediately followed by a
/// little-endian float32 payload. The header always carries "n_floats".
void write_header_blob(const std::filesystem::path& path, nlohmann::json header,
                       std::span<const float> payload);

struct HeaderBlob {
    nlohmann::json header;
    std::vector<float> payload;
};

HeaderBlob read_header_blob(const std::filesystem::path& path);

// Raw little-endian float32 files (no header).
void write_f32_le(const std::filesystem::path& path, std::span<const float> values);
std::vector<float> read_f32_le(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);
// Pretty-printed with a trailing newline; key order is nlohmann's sorted map,
// so identical values always serialize to identical bytes.
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace tfmd
