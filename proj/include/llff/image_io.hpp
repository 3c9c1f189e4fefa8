#pragma once

#include "llff/image.hpp"

#include <string>

namespace llff {

/// Decoded PNG with channels expanded to RGBA and values scaled to [0,1].
/// Accepts 8- and 16-bit gray, gray+alpha, RGB and RGBA.
ImageRGBA read_png(const std::string& path);

/// 8-bit writers; values are clamped to [0,1] and rounded.
void write_png(const std::string& path, const ImageRGB& image);
void write_png(const std::string& path, const ImageRGBA& image);
void write_png(const std::string& path, const ImageGray& image);

/// Rounds to the 8-bit grid the PNG writer uses.
std::uint8_t to_byte(float v) noexcept;

} // namespace llff
