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


// Binary morphology with Euclidean disk structuring elements, topology
// preserving thinning, and elastic warps shared between an image and its
// masks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "geomforge/error.hpp"
#include "geomforge/raster.hpp"
#include "geomforge/rng.hpp"

namespace geomforge {

namespace detail {

/// Dilation by the disk {d : |d| <= r}; pixels outside the frame read as
/// `outside`.
inline BinaryMask dilate_with(const BinaryMask& m, double r, bool outside) {
  if (!(r >= 0.0)) throw ParamOutOfRange("dilate: radius must be >= 0");
  const int W = m.width(), H = m.height();
  const int R = static_cast<int>(std::floor(r));
  if (R == 0 || W == 0 || H == 0) return m;
  const double r2 = r * r;
  // Pad by R so out-of-frame foreground is handled uniformly.
  const int PW = W + 2 * R, PH = H + 2 * R;
  constexpr int kFar = std::numeric_limits<int>::max() / 4;
  std::vector<int> near(static_cast<std::size_t>(PW) * PH, kFar);
  for (int y = 0; y < PH; ++y) {
    int* row = &near[static_cast<std::size_t>(y) * PW];
    const auto on = [&](int x) {
      const int ox = x - R, oy = y - R;
      return m.in_bounds(ox, oy) ? m.at(ox, oy) != 0 : outside;
    };
    int last = -kFar;
    for (int x = 0; x < PW; ++x) {
      if (on(x)) last = x;
      row[x] = x - last;
    }
    last = kFar;
    for (int x = PW - 1; x >= 0; --x) {
      if (on(x)) last = x;
      row[x] = std::min(row[x], last - x);
    }
  }
  BinaryMask out(W, H);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      bool hit = false;
      for (int dy = -R; dy <= R && !hit; ++dy) {
        const long long h = near[static_cast<std::size_t>(y + R + dy) * PW + (x + R)];
        hit = h <= R && static_cast<double>(h * h + dy * dy) <= r2;
      }
      if (hit) out.set(x, y);
    }
  }
  return out;
}

}  // namespace detail

/// Pixels within Euclidean distance `r` of a foreground pixel; the frame
/// exterior is background.
inline BinaryMask dilate(const BinaryMask& m, double r) {
  return detail::dilate_with(m, r, false);
}

/// Pixels whose whole radius-`r` disk is foreground and inside the frame.
inline BinaryMask erode(const BinaryMask& m, double r) {
  return detail::dilate_with(m.complement(), r, true).complement();
}

inline BinaryMask close(const BinaryMask& m, double r) { return erode(dilate(m, r), r); }

/// Skeleton by two-subiteration thinning. Candidates are deleted one at a
/// time on the live image and only when their 8-neighbourhood has a single
/// foreground run (A = 1) of 2..6 pixels, so each deletion is a simple-point
/// removal and the 8-connected component count never changes.
inline BinaryMask thin(const BinaryMask& m) {
  BinaryMask img = m;
  const int W = img.width(), H = img.height();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
          if (!img.at(x, y)) continue;
          // P2..P9 clockwise from north.
          const int p[8] = {img.get(x, y - 1),     img.get(x + 1, y - 1), img.get(x + 1, y),
                            img.get(x + 1, y + 1), img.get(x, y + 1),     img.get(x - 1, y + 1),
                            img.get(x - 1, y),     img.get(x - 1, y - 1)};
          int b = 0, a = 0;
          for (int k = 0; k < 8; ++k) {
            b += p[k];
            a += (!p[k] && p[(k + 1) % 8]) ? 1 : 0;
          }
          if (b < 2 || b > 6 || a != 1) continue;
          const int n = p[0], e = p[2], s = p[4], w = p[6];
          const bool ok = pass == 0 ? (n * e * s == 0 && e * s * w == 0)
                                    : (n * e * w == 0 && n * s * w == 0);
          if (!ok) continue;
          img.set(x, y, false);
          changed = true;
        }
      }
    }
  }
  return img;
}

/// Per-pixel displacement; output(x, y) samples input(x - dx, y - dy).
struct ElasticField {
  int width = 0;
  int height = 0;
  std::vector<double> dx, dy;
  double alpha = 2.0;
  double sigma = 8.0;

  static ElasticField constant(int w, int h, double cx, double cy) {
    ElasticField f;
    f.width = w;
    f.height = h;
    const auto n = static_cast<std::size_t>(w) * h;
    f.dx.assign(n, cx);
    f.dy.assign(n, cy);
    f.alpha = std::hypot(cx, cy);
    f.sigma = 0.0;
    return f;
  }

  double max_magnitude() const {
    double best = 0.0;
    for (std::size_t i = 0; i < dx.size(); ++i) best = std::max(best, std::hypot(dx[i], dy[i]));
    return best;
  }
};

namespace detail {

inline void gaussian_blur(std::vector<double>& v, int w, int h, double sigma) {
  if (sigma <= 0.0) return;
  const int rad = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * rad + 1));
  double sum = 0.0;
  for (int i = -rad; i <= rad; ++i) {
    k[static_cast<std::size_t>(i + rad)] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[static_cast<std::size_t>(i + rad)];
  }
  for (auto& x : k) x /= sum;
  const auto clampi = [](int v, int n) { return std::clamp(v, 0, n - 1); };
  std::vector<double> tmp(v.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -rad; i <= rad; ++i) {
        acc += k[static_cast<std::size_t>(i + rad)] *
               v[static_cast<std::size_t>(y) * w + clampi(x + i, w)];
      }
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -rad; i <= rad; ++i) {
        acc += k[static_cast<std::size_t>(i + rad)] *
               tmp[static_cast<std::size_t>(clampi(y + i, h)) * w + x];
      }
      v[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
}

}  // namespace detail

/// Smoothed uniform noise rescaled so the largest displacement is `alpha`.
inline ElasticField make_elastic_field(int w, int h, double alpha, double sigma, RngStream& rng) {
  if (w <= 0 || h <= 0) throw DimensionMismatch("elastic field: empty frame");
  if (!(alpha >= 0.0) || !(sigma >= 0.0)) {
    throw ParamOutOfRange("elastic field: alpha and sigma must be >= 0");
  }
  ElasticField f;
  f.width = w;
  f.height = h;
  f.alpha = alpha;
  f.sigma = sigma;
  const auto n = static_cast<std::size_t>(w) * h;
  f.dx.resize(n);
  f.dy.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    f.dx[i] = rng.uniform(-1.0, 1.0);
    f.dy[i] = rng.uniform(-1.0, 1.0);
  }
  detail::gaussian_blur(f.dx, w, h, sigma);
  detail::gaussian_blur(f.dy, w, h, sigma);
  const double peak = f.max_magnitude();
  const double s = peak > 0.0 ? alpha / peak : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    f.dx[i] *= s;
    f.dy[i] *= s;
  }
  return f;
}

struct WarpResult {
  RasterImage image;
  std::vector<BinaryMask> masks;
};

/// Applies one field to an image (bilinear, background outside) and to its
/// masks (nearest, 0 outside).
inline WarpResult elastic_deform(const RasterImage& img, const std::vector<BinaryMask>& masks,
                                 const ElasticField& field, Rgb background = kWhite) {
  const int W = img.width(), H = img.height();
  if (field.width != W || field.height != H) {
    throw DimensionMismatch("elastic_deform: field does not match image");
  }
  for (const auto& m : masks) {
    if (m.width() != W || m.height() != H) {
      throw DimensionMismatch("elastic_deform: mask does not match image");
    }
  }
  WarpResult out{RasterImage(W, H, background), {}};
  out.masks.assign(masks.size(), BinaryMask(W, H));
  const auto texel = [&](int x, int y) {
    return (x >= 0 && y >= 0 && x < W && y < H) ? img.at(x, y) : background;
  };
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * W + x;
      const double sx = x - field.dx[i], sy = y - field.dy[i];
      const int x0 = static_cast<int>(std::floor(sx)), y0 = static_cast<int>(std::floor(sy));
      const double fx = sx - x0, fy = sy - y0;
      const Rgb c00 = texel(x0, y0), c10 = texel(x0 + 1, y0), c01 = texel(x0, y0 + 1),
                c11 = texel(x0 + 1, y0 + 1);
      const auto mix = [&](std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d) {
        const double v = (1 - fy) * ((1 - fx) * a + fx * b) + fy * ((1 - fx) * c + fx * d);
        return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      };
      out.image.set(x, y, {mix(c00.r, c10.r, c01.r, c11.r), mix(c00.g, c10.g, c01.g, c11.g),
                           mix(c00.b, c10.b, c01.b, c11.b)});
      const int nx = static_cast<int>(std::floor(sx + 0.5));
      const int ny = static_cast<int>(std::floor(sy + 0.5));
      for (std::size_t k = 0; k < masks.size(); ++k) {
        if (masks[k].get(nx, ny)) out.masks[k].set(x, y);
      }
    }
  }
  return out;
}

}  // namespace geomforge
