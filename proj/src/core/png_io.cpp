#include "chromasim/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>

namespace chromasim::io {
namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw InputError("cannot open " + path.string());
    return f;
}

[[noreturn]] void on_png_error(png_structp, png_const_charp msg) { throw InputError(std::string("png: ") + msg); }
void on_png_warning(png_structp, png_const_charp) {}

void write_raw(const std::filesystem::path& path, int width, int height, int color_type, int bit_depth,
               const std::vector<png_bytep>& rows) {
    FilePtr f = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, on_png_error, on_png_warning);
    if (!png) throw InputError("png: cannot create write struct");
    png_infop info = png_create_info_struct(png);
    try {
        if (!info) throw InputError("png: cannot create info struct");
        png_init_io(png, f.get());
        png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth,
                     color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_set_compression_level(png, 6);
        png_write_info(png, info);
        if (bit_depth == 16) png_set_swap(png);  // host little-endian -> PNG big-endian
        png_write_image(png, const_cast<png_bytepp>(rows.data()));
        png_write_end(png, nullptr);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        throw;
    }
    png_destroy_write_struct(&png, &info);
}

std::uint16_t to_u16(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return static_cast<std::uint16_t>(std::lround(v * 65535.0));
}

std::uint8_t to_u8(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

}  // namespace

RawPng read_png(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    png_byte sig[8];
    if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw InputError("not a PNG file: " + path.string());
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, on_png_error, on_png_warning);
    if (!png) throw InputError("png: cannot create read struct");
    png_infop info = png_create_info_struct(png);
    RawPng out;
    try {
        if (!info) throw InputError("png: cannot create info struct");
        png_init_io(png, f.get());
        png_set_sig_bytes(png, 8);
        png_read_info(png, info);
        const int color = png_get_color_type(png, info);
        int depth = png_get_bit_depth(png, info);
        if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
        if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
        if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
        if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png), png_set_strip_alpha(png);
        if (depth == 16) png_set_swap(png);
        png_read_update_info(png, info);

        out.width = static_cast<int>(png_get_image_width(png, info));
        out.height = static_cast<int>(png_get_image_height(png, info));
        out.channels = png_get_channels(png, info);
        depth = png_get_bit_depth(png, info);
        out.bit_depth = depth;
        if (out.channels != 1 && out.channels != 3) throw InputError("unsupported PNG channel layout: " + path.string());

        const std::size_t rowbytes = png_get_rowbytes(png, info);
        std::vector<png_byte> buffer(rowbytes * static_cast<std::size_t>(out.height));
        std::vector<png_bytep> rows(static_cast<std::size_t>(out.height));
        for (int y = 0; y < out.height; ++y) rows[static_cast<std::size_t>(y)] = buffer.data() + rowbytes * static_cast<std::size_t>(y);
        png_read_image(png, rows.data());
        png_read_end(png, nullptr);

        const std::size_t n = static_cast<std::size_t>(out.width) * static_cast<std::size_t>(out.height) *
                              static_cast<std::size_t>(out.channels);
        out.samples.resize(n);
        if (depth == 16) {
            std::memcpy(out.samples.data(), buffer.data(), n * sizeof(std::uint16_t));
        } else {
            for (std::size_t i = 0; i < n; ++i) out.samples[i] = buffer[i];
        }
    } catch (...) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw;
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

void write_png_gray16(const std::filesystem::path& path, int width, int height,
                      const std::vector<std::uint16_t>& samples) {
    if (samples.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw DimensionError("gray16 sample count does not match dimensions");
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        rows[static_cast<std::size_t>(y)] = reinterpret_cast<png_bytep>(
            const_cast<std::uint16_t*>(samples.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(width)));
    }
    write_raw(path, width, height, PNG_COLOR_TYPE_GRAY, 16, rows);
}

void write_png_rgb8(const std::filesystem::path& path, int width, int height,
                    const std::vector<std::uint8_t>& interleaved) {
    if (interleaved.size() != 3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw DimensionError("rgb8 sample count does not match dimensions");
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(
            interleaved.data() + 3 * static_cast<std::size_t>(y) * static_cast<std::size_t>(width));
    }
    write_raw(path, width, height, PNG_COLOR_TYPE_RGB, 8, rows);
}

void write_gray16(const std::filesystem::path& path, const ScalarField& field) {
    std::vector<std::uint16_t> s(field.size());
    std::transform(field.values().begin(), field.values().end(), s.begin(), to_u16);
    write_png_gray16(path, field.width(), field.height(), s);
}

void write_gray16_autoscale(const std::filesystem::path& path, const ScalarField& field) {
    const auto [lo, hi] = std::minmax_element(field.values().begin(), field.values().end());
    const double span = *hi - *lo;
    std::vector<std::uint16_t> s(field.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = span > 0.0 ? to_u16((field.values()[i] - *lo) / span) : 0;
    }
    write_png_gray16(path, field.width(), field.height(), s);
}

void write_rgb8(const std::filesystem::path& path, const Image& image) {
    if (image.channels() != 3) throw DimensionError("write_rgb8 expects a 3-channel image");
    const std::size_t n = static_cast<std::size_t>(image.width()) * static_cast<std::size_t>(image.height());
    std::vector<std::uint8_t> buf(3 * n);
    for (int c = 0; c < 3; ++c) {
        const auto& v = image.channel(c).values();
        for (std::size_t i = 0; i < n; ++i) buf[3 * i + static_cast<std::size_t>(c)] = to_u8(v[i]);
    }
    write_png_rgb8(path, image.width(), image.height(), buf);
}

void write_mask(const std::filesystem::path& path, const InstanceMask& mask) {
    write_png_gray16(path, mask.width(), mask.height(), mask.values());
}

Image read_image(const std::filesystem::path& path) {
    const RawPng raw = read_png(path);
    const double scale = raw.bit_depth == 16 ? 65535.0 : 255.0;
    Image img(raw.channels, raw.width, raw.height);
    const std::size_t n = static_cast<std::size_t>(raw.width) * static_cast<std::size_t>(raw.height);
    for (int c = 0; c < raw.channels; ++c) {
        auto& v = img.channel(c).values();
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = raw.samples[i * static_cast<std::size_t>(raw.channels) + static_cast<std::size_t>(c)] / scale;
        }
    }
    return img;
}

InstanceMask read_mask(const std::filesystem::path& path) {
    const RawPng raw = read_png(path);
    if (raw.channels != 1) throw InputError("mask PNG must be grayscale: " + path.string());
    InstanceMask m(raw.width, raw.height);
    m.values() = raw.samples;
    return m;
}

}  // namespace chromasim::io
