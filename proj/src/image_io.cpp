#include "llff/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <vector>

namespace llff {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void png_warn(png_structp, png_const_charp) {}

template <int C>
void write_png_impl(const std::string& path, const Image<C>& image) {
  static_assert(C == 1 || C == 3 || C == 4);
  const auto tmp = path + ".tmp";
  {
    FilePtr file{std::fopen(tmp.c_str(), "wb")};
    if (!file) throw std::runtime_error("cannot write " + path);
    std::vector<png_byte> row(static_cast<std::size_t>(image.width()) * C);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warn);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
      png_destroy_write_struct(&png, &info);
      throw std::runtime_error("libpng failed writing " + path);
    }
    {
      png_init_io(png, file.get());
      const int color_type = C == 1 ? PNG_COLOR_TYPE_GRAY : (C == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_RGBA);
      png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()), static_cast<png_uint_32>(image.height()), 8,
                   color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
      png_write_info(png, info);
      for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
          for (int c = 0; c < C; ++c) row[static_cast<std::size_t>(x) * C + c] = to_byte(image.at(x, y, c));
        }
        png_write_row(png, row.data());
      }
      png_write_end(png, nullptr);
    }
    png_destroy_write_struct(&png, &info);
  }
  std::filesystem::rename(tmp, path);
}

} // namespace

std::uint8_t to_byte(float v) noexcept {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0F, 1.0F) * 255.0F));
}

ImageRGBA read_png(const std::string& path) {
  FilePtr file{std::fopen(path.c_str(), "rb")};
  if (!file) throw std::runtime_error("cannot open " + path);
  png_byte sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw std::runtime_error(path + " is not a PNG file");
  }
  std::vector<png_byte> buffer;
  std::vector<png_bytep> rows;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warn);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("libpng failed reading " + path);
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
  if (bit_depth == 16) png_set_swap(png);
  png_set_add_alpha(png, bit_depth == 16 ? 0xFFFF : 0xFF, PNG_FILLER_AFTER);
  png_read_update_info(png, info);

  const auto width = static_cast<int>(png_get_image_width(png, info));
  const auto height = static_cast<int>(png_get_image_height(png, info));
  const int depth = png_get_bit_depth(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  buffer.resize(rowbytes * static_cast<std::size_t>(height));
  rows.resize(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) rows[static_cast<std::size_t>(y)] = buffer.data() + rowbytes * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  ImageRGBA out(width, height);
  for (int y = 0; y < height; ++y) {
    const png_bytep row = rows[static_cast<std::size_t>(y)];
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < 4; ++c) {
        const std::size_t i = static_cast<std::size_t>(x) * 4 + c;
        if (depth == 16) {
          std::uint16_t v = 0;
          std::memcpy(&v, row + 2 * i, 2);
          out.at(x, y, c) = static_cast<float>(v) / 65535.0F;
        } else {
          out.at(x, y, c) = static_cast<float>(row[i]) / 255.0F;
        }
      }
    }
  }
  return out;
}

void write_png(const std::string& path, const ImageRGB& image) { write_png_impl(path, image); }
void write_png(const std::string& path, const ImageRGBA& image) { write_png_impl(path, image); }
void write_png(const std::string& path, const ImageGray& image) { write_png_impl(path, image); }

} // namespace llff
