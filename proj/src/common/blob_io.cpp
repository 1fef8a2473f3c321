#include "tfmd/common/blob_io.hpp"

#include "tfmd/common/error.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace tfmd {

namespace {

void append_le(std::string& out, std::span<const float> values) {
    const std::size_t offset = out.size();
    out.resize(offset + values.size() * 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint32_t bits = std::bit_cast<std::uint32_t>(values[i]);
        for (int b = 0; b < 4; ++b) {
            out[offset + i * 4 + b] = static_cast<char>((bits >> (8 * b)) & 0xFFu);
        }
    }
}

std::vector<float> decode_le(const char* bytes, std::size_t n_floats) {
    std::vector<float> values(n_floats);
    for (std::size_t i = 0; i < n_floats; ++i) {
        std::uint32_t bits = 0;
        for (int b = 0; b < 4; ++b) {
            bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i * 4 + b])) << (8 * b);
        }
        values[i] = std::bit_cast<float>(bits);
    }
    return values;
}

void ensure_parent(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_header_blob(const std::filesystem::path& path, nlohmann::json header,
                       std::span<const float> payload) {
    header["n_floats"] = payload.size();
    std::string bytes = header.dump();
    bytes.push_back('\n');
    append_le(bytes, payload);
    write_text(path, bytes);
}

HeaderBlob read_header_blob(const std::filesystem::path& path) {
    const std::string bytes = read_text(path);
    const auto newline = bytes.find('\n');
    if (newline == std::string::npos) throw IoError("missing header line in " + path.string());
    HeaderBlob blob;
    try {
        blob.header = nlohmann::json::parse(bytes.substr(0, newline));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad header in " + path.string() + ": " + e.what());
    }
    const std::size_t n = blob.header.value("n_floats", std::size_t{0});
    if (bytes.size() - newline - 1 != n * 4) {
        throw IoError("payload size mismatch in " + path.string());
    }
    blob.payload = decode_le(bytes.data() + newline + 1, n);
    return blob;
}

void write_f32_le(const std::filesystem::path& path, std::span<const float> values) {
    std::string bytes;
    append_le(bytes, values);
    write_text(path, bytes);
}

std::vector<float> read_f32_le(const std::filesystem::path& path) {
    const std::string bytes = read_text(path);
    if (bytes.size() % 4 != 0) throw IoError("truncated float32 file " + path.string());
    return decode_le(bytes.data(), bytes.size() / 4);
}

nlohmann::json read_json(const std::filesystem::path& path) {
    try {
        return nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
    write_text(path, value.dump(2) + "\n");
}

}  // namespace tfmd
