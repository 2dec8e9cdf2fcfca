#pragma once

// PNG decoding/encoding on top of libpng. Link against PNG::PNG.

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmb/ingest.hpp"

namespace rmb {

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace detail

/// Decodes any PNG to 8-bit luminance. Palette, 16-bit and low bit depth
/// images are expanded first; colour pixels become (r + g + b) / 3 and alpha
/// is dropped.
inline RawBitmap read_png(const std::filesystem::path& path) {
  detail::FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw std::runtime_error("cannot open " + path.string());
  png_byte sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw std::runtime_error("not a PNG file: " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  RawBitmap out;
  std::vector<png_byte> rows;
  std::vector<png_bytep> row_ptrs;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("corrupt PNG: " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const auto color = png_get_color_type(png, info);
  const auto depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (depth == 16) png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  const int channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  rows.resize(stride * static_cast<std::size_t>(h));
  row_ptrs.resize(static_cast<std::size_t>(h));
  for (int y = 0; y < h; ++y) row_ptrs[y] = rows.data() + stride * static_cast<std::size_t>(y);
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  out = RawBitmap(w, h);
  for (int y = 0; y < h; ++y) {
    const png_byte* row = row_ptrs[y];
    for (int x = 0; x < w; ++x) {
      const png_byte* px = row + static_cast<std::size_t>(x) * channels;
      out.at(x, y) = channels >= 3
                         ? static_cast<std::uint8_t>((unsigned{px[0]} + px[1] + px[2]) / 3)
                         : px[0];
    }
  }
  return out;
}

/// Writes an 8-bit grayscale PNG.
inline void write_png(const std::filesystem::path& path, const RawBitmap& img) {
  if (img.empty()) throw std::invalid_argument("write_png: empty image");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  detail::FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) throw std::runtime_error("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("PNG encoding failed: " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height),
               8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y)
    png_write_row(png, img.luminance.data() + static_cast<std::size_t>(y) * img.width);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace rmb
