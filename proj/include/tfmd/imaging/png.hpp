#pragma once

#include "tfmd/imaging/image.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace tfmd::imaging {

inline constexpr std::array<std::uint8_t, 8> kPngSignature{0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A};

/// Truecolor 8-bit PNG (IHDR, one IDAT, IEND). Every scanline uses filter 0
/// and zlib runs at a fixed level, so identical images give identical bytes.
std::vector<std::uint8_t> encode_png(const RGBImage& img);

/// Reads any 8-bit RGB or RGBA PNG via libpng (alpha is dropped).
RGBImage decode_png(std::span<const std::uint8_t> bytes);

void write_png(const std::filesystem::path& path, const RGBImage& img);
RGBImage read_png(const std::filesystem::path& path);

}  // namespace tfmd::imaging
