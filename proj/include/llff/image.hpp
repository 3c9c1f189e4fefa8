#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace llff {

/// Dense float raster with interleaved channels, row-major.
template <int Channels>
class Image {
public:
  static constexpr int channels = Channels;

  Image() = default;
  Image(int width, int height, float fill = 0.0F)
      : width_{width}, height_{height},
        data_(checked_size(width, height), fill) {}

  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }
  [[nodiscard]] bool same_shape(int width, int height) const noexcept {
    return width_ == width && height_ == height;
  }
  template <int C>
  [[nodiscard]] bool same_shape(const Image<C>& other) const noexcept {
    return same_shape(other.width(), other.height());
  }

  [[nodiscard]] float& at(int x, int y, int c = 0) noexcept { return data_[index(x, y) + c]; }
  [[nodiscard]] float at(int x, int y, int c = 0) const noexcept { return data_[index(x, y) + c]; }

  [[nodiscard]] std::span<float> pixel(int x, int y) noexcept {
    return {data_.data() + index(x, y), Channels};
  }
  [[nodiscard]] std::span<const float> pixel(int x, int y) const noexcept {
    return {data_.data() + index(x, y), Channels};
  }

  [[nodiscard]] std::span<float> data() noexcept { return data_; }
  [[nodiscard]] std::span<const float> data() const noexcept { return data_; }

  bool operator==(const Image&) const = default;

private:
  static std::size_t checked_size(int width, int height) {
    if (width < 1 || height < 1) {
      throw std::invalid_argument("image dimensions must be positive, got " +
                                  std::to_string(width) + "x" + std::to_string(height));
    }
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * Channels;
  }
  [[nodiscard]] std::size_t index(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * Channels;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

using ImageGray = Image<1>;
using ImageRGB = Image<3>;
using ImageRGBA = Image<4>;

/// Drops alpha (straight colour kept).
inline ImageRGB rgb_of(const ImageRGBA& rgba) {
  ImageRGB out(rgba.width(), rgba.height());
  for (int y = 0; y < rgba.height(); ++y) {
    for (int x = 0; x < rgba.width(); ++x) {
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = rgba.at(x, y, c);
    }
  }
  return out;
}

inline ImageRGBA with_alpha(const ImageRGB& rgb, float alpha = 1.0F) {
  ImageRGBA out(rgb.width(), rgb.height());
  for (int y = 0; y < rgb.height(); ++y) {
    for (int x = 0; x < rgb.width(); ++x) {
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = rgb.at(x, y, c);
      out.at(x, y, 3) = alpha;
    }
  }
  return out;
}

} // namespace llff
