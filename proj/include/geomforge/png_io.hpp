// Copyright 2026 The GeomForge Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// PNG reading and writing through libpng. Output carries no timestamps or
// text chunks, so identical pixels always produce identical bytes.

#pragma once

#include <png.h>
#include <zlib.h>

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "geomforge/error.hpp"
#include "geomforge/raster.hpp"

namespace geomforge {

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline void write_png_rows(const std::string& path, int width, int height, int color_type,
                           const std::vector<const std::uint8_t*>& rows) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot open " + path + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng: out of memory");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng: failed writing " + path);
  }
  png_init_io(png, f.get());
  png_set_compression_level(png, 1);
  png_set_filter(png, 0, PNG_FILTER_UP);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (const auto* row : rows) png_write_row(png, row);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(f.get()) != 0) throw IoError("failed flushing " + path);
}

struct DecodedPng {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 (gray) or 3 (RGB)
  std::vector<std::uint8_t> data;
};

inline DecodedPng read_png_raw(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open " + path);
  png_byte sig[8];
  if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw IoError(path + " is not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng: out of memory");
  }
  DecodedPng out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng: failed reading " + path);
  }
  png_init_io(png, f.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS)) {
    png_set_strip_alpha(png);
  }
  png_read_update_info(png, info);
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  out.data.resize(stride * static_cast<std::size_t>(out.height));
  std::vector<png_bytep> rows(static_cast<std::size_t>(out.height));
  for (int y = 0; y < out.height; ++y) rows[static_cast<std::size_t>(y)] = &out.data[stride * y];
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  if (out.channels != 1 && out.channels != 3) throw IoError(path + ": unsupported channel layout");
  return out;
}

}  // namespace detail

inline void write_png(const std::string& path, const RasterImage& img) {
  std::vector<const std::uint8_t*> rows;
  for (int y = 0; y < img.height(); ++y) {
    rows.push_back(img.bytes().data() + static_cast<std::size_t>(y) * img.width() * 3);
  }
  detail::write_png_rows(path, img.width(), img.height(), PNG_COLOR_TYPE_RGB, rows);
}

/// Masks are stored as 8-bit grayscale, 0 or 255.
inline void write_png(const std::string& path, const BinaryMask& m) {
  std::vector<std::uint8_t> buf(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) buf[i] = m[i] ? 255 : 0;
  std::vector<const std::uint8_t*> rows;
  for (int y = 0; y < m.height(); ++y) rows.push_back(buf.data() + static_cast<std::size_t>(y) * m.width());
  detail::write_png_rows(path, m.width(), m.height(), PNG_COLOR_TYPE_GRAY, rows);
}

inline RasterImage read_png_image(const std::string& path) {
  const auto d = detail::read_png_raw(path);
  RasterImage img(d.width, d.height);
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * d.width + x) * d.channels;
      const std::uint8_t r = d.data[i];
      img.set(x, y, d.channels == 1 ? Rgb{r, r, r} : Rgb{r, d.data[i + 1], d.data[i + 2]});
    }
  }
  return img;
}

/// A pixel is foreground when any channel is >= 128.
inline BinaryMask read_png_mask(const std::string& path) {
  const auto d = detail::read_png_raw(path);
  BinaryMask m(d.width, d.height);
  for (std::size_t i = 0; i < m.size(); ++i) {
    bool on = false;
    for (int c = 0; c < d.channels; ++c) on = on || d.data[i * d.channels + c] >= 128;
    m[i] = on ? 1 : 0;
  }
  return m;
}

}  // namespace geomforge
