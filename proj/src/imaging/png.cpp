#include "tfmd/imaging/png.hpp"

#include "tfmd/common/blob_io.hpp"
#include "tfmd/common/error.hpp"

#include <png.h>
#include <zlib.h>

#include <csetjmp>
#include <cstring>
#include <string>

namespace tfmd::imaging {

namespace {

constexpr int kCompressionLevel = 6;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4], std::span<const std::uint8_t> data) {
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t type_pos = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, out.data() + type_pos, static_cast<uInt>(4 + data.size()));
    put_u32(out, static_cast<std::uint32_t>(crc));
}

struct ReadCursor {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;
};

void read_from_span(png_structp png, png_bytep out, png_size_t n) {
    auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
    if (cur->pos + n > cur->bytes.size()) png_error(png, "truncated PNG");
    std::memcpy(out, cur->bytes.data() + cur->pos, n);
    cur->pos += n;
}

// libpng reports through these instead of stderr; the message ends up in the exception.
thread_local std::string g_png_error;

void on_png_error(png_structp png, png_const_charp msg) {
    g_png_error = msg;
    png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

}  // namespace

std::vector<std::uint8_t> encode_png(const RGBImage& img) {
    if (img.width <= 0 || img.height <= 0 ||
        img.pixels.size() != static_cast<std::size_t>(img.width) * img.height * 3) {
        throw InvalidArgument("invalid RGB image");
    }
    std::vector<std::uint8_t> out(kPngSignature.begin(), kPngSignature.end());

    std::vector<std::uint8_t> ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(img.width));
    put_u32(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr.insert(ihdr.end(), {8, 2, 0, 0, 0});  // bit depth, truecolor, deflate, filter set 0, no interlace
    put_chunk(out, "IHDR", ihdr);

    const std::size_t stride = static_cast<std::size_t>(img.width) * 3;
    std::vector<std::uint8_t> raw;
    raw.reserve((stride + 1) * img.height);
    for (int r = 0; r < img.height; ++r) {
        raw.push_back(0);
        raw.insert(raw.end(), img.at(r, 0), img.at(r, 0) + stride);
    }
    uLongf packed_len = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> packed(packed_len);
    if (compress2(packed.data(), &packed_len, raw.data(), static_cast<uLong>(raw.size()), kCompressionLevel) != Z_OK) {
        throw Error("png-encode", "zlib compression failed");
    }
    packed.resize(packed_len);
    put_chunk(out, "IDAT", packed);
    put_chunk(out, "IEND", {});
    return out;
}

RGBImage decode_png(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) throw IoError("not a PNG stream");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, on_png_error, on_png_warning);
    if (!png) throw IoError("libpng initialisation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng initialisation failed");
    }

    ReadCursor cursor{bytes, 0};
    RGBImage img;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("corrupt PNG stream: " + g_png_error);
    }
    png_set_read_fn(png, &cursor, read_from_span);
    png_read_info(png, info);
    const auto color = png_get_color_type(png, info);
    if (png_get_bit_depth(png, info) != 8 || (color != PNG_COLOR_TYPE_RGB && color != PNG_COLOR_TYPE_RGBA)) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("only 8-bit RGB/RGBA PNGs are supported");
    }
    if (color == PNG_COLOR_TYPE_RGBA) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    img = RGBImage(static_cast<int>(png_get_image_width(png, info)), static_cast<int>(png_get_image_height(png, info)));
    rows.resize(img.height);
    for (int r = 0; r < img.height; ++r) rows[r] = img.at(r, 0);
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_png(const std::filesystem::path& path, const RGBImage& img) {
    const auto bytes = encode_png(img);
    write_text(path, std::string(bytes.begin(), bytes.end()));
}

RGBImage read_png(const std::filesystem::path& path) {
    const auto text = read_text(path);
    return decode_png(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace tfmd::imaging
