#pragma once

#include <cstdint>
#include <vector>

namespace tfmd::imaging {

/// 8-bit RGB image, row-major, 3 bytes per pixel. Row 0 is the highest
/// frequency when the image is a rendered spectrogram.
struct RGBImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    RGBImage() = default;
    RGBImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::uint8_t* at(int row, int col) { return pixels.data() + (static_cast<std::size_t>(row) * width + col) * 3; }
    const std::uint8_t* at(int row, int col) const {
        return pixels.data() + (static_cast<std::size_t>(row) * width + col) * 3;
    }

    friend bool operator==(const RGBImage&, const RGBImage&) = default;
};

}  // namespace tfmd::imaging
