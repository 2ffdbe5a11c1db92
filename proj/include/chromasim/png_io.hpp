#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "chromasim/common.hpp"

namespace chromasim::io {

/// Decoded PNG samples, row-major, interleaved channels.
struct RawPng {
    int width = 0;
    int height = 0;
    int channels = 0;   // 1 (gray) or 3 (RGB); alpha is dropped
    int bit_depth = 0;  // 8 or 16
    std::vector<std::uint16_t> samples;
};

RawPng read_png(const std::filesystem::path& path);

void write_png_gray16(const std::filesystem::path& path, int width, int height,
                      const std::vector<std::uint16_t>& samples);
void write_png_rgb8(const std::filesystem::path& path, int width, int height,
                    const std::vector<std::uint8_t>& interleaved);

/// value -> round(65535 * clamp(value, 0, 1)).
void write_gray16(const std::filesystem::path& path, const ScalarField& field);
/// Affine map of [min, max] onto [0, 65535]; used for debug field dumps.
void write_gray16_autoscale(const std::filesystem::path& path, const ScalarField& field);
void write_rgb8(const std::filesystem::path& path, const Image& image);
void write_mask(const std::filesystem::path& path, const InstanceMask& mask);

/// 16-bit gray -> /65535, 8-bit -> /255; RGB stays 3-channel.
Image read_image(const std::filesystem::path& path);
/// Raw label values of a grayscale PNG.
InstanceMask read_mask(const std::filesystem::path& path);

}  // namespace chromasim::io
