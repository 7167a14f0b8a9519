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


// Mask <-> polygon token codec and a run-length baseline.
//
// Pixel centres sit at integer coordinates, so a pixel covers the unit
// square around its centre and traced contours run along pixel edges at
// half-integer coordinates. Decoded polygons are filled by sampling pixel
// centres.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "geomforge/error.hpp"
#include "geomforge/geom_core.hpp"
#include "geomforge/raster.hpp"

namespace geomforge {

inline constexpr int kQuantLevels = 256;
inline constexpr double kDefaultSimplifyEpsilon = 1.0;

struct Contour {
  std::vector<Point2> points;  // closure implicit
  bool hole = false;
};

struct QuantizedPolygon {
  std::vector<std::array<int, 2>> vertices;
  friend bool operator==(const QuantizedPolygon&, const QuantizedPolygon&) = default;
};

/// Shoelace area, positive for outer loops in image (y-down) coordinates.
inline double signed_area(const std::vector<Point2>& pts) {
  double a = 0.0;
  for (std::size_t i = 0, n = pts.size(); i < n; ++i) a += cross(pts[i], pts[(i + 1) % n]);
  return a / 2.0;
}

// -- contours -------------------------------------------------------------------

/// One closed loop per boundary; outer loops are 8-connected components,
/// holes are 4-connected background regions enclosed by them. Loop vertices
/// are midpoints of the pixel-boundary edges (corners cut by half a pixel),
/// so every pixel centre stays strictly on its own side and a straight
/// digital edge lies inside a strip narrower than one pixel.
inline std::vector<Contour> extract_contours(const BinaryMask& m) {
  const int W = m.width(), H = m.height();
  const int CW = W + 1;
  // Directions: 0 right, 1 down, 2 left, 3 up (y down).
  static constexpr int kDx[4] = {1, 0, -1, 0};
  static constexpr int kDy[4] = {0, 1, 0, -1};
  // Outgoing boundary edges per corner as a 4-bit set.
  std::vector<std::uint8_t> out(static_cast<std::size_t>(CW) * (H + 1), 0);
  const auto corner = [&](int cx, int cy) { return static_cast<std::size_t>(cy) * CW + cx; };
  std::size_t edges = 0;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      if (!m.at(x, y)) continue;
      // Foreground on the walker's right in screen terms: TL->TR->BR->BL.
      if (!m.get(x, y - 1)) { out[corner(x, y)] |= 1 << 0; ++edges; }
      if (!m.get(x + 1, y)) { out[corner(x + 1, y)] |= 1 << 1; ++edges; }
      if (!m.get(x, y + 1)) { out[corner(x + 1, y + 1)] |= 1 << 2; ++edges; }
      if (!m.get(x - 1, y)) { out[corner(x, y + 1)] |= 1 << 3; ++edges; }
    }
  }
  const std::vector<std::uint8_t> orig = out;
  std::vector<Contour> result;
  if (edges == 0) return result;
  for (int sy = 0; sy <= H; ++sy) {
    for (int sx = 0; sx <= W; ++sx) {
      while (out[corner(sx, sy)]) {
        int cx = sx, cy = sy;
        int dir = std::countr_zero(static_cast<unsigned>(out[corner(cx, cy)]));
        std::vector<Point2> mids;
        while (true) {
          out[corner(cx, cy)] &= static_cast<std::uint8_t>(~(1 << dir));
          mids.push_back({cx + 0.5 * kDx[dir] - 0.5, cy + 0.5 * kDy[dir] - 0.5});
          cx += kDx[dir];
          cy += kDy[dir];
          const std::uint8_t here = orig[corner(cx, cy)];
          // Saddle corners turn left, which joins diagonally touching pixels.
          dir = std::popcount(static_cast<unsigned>(here)) == 2
                    ? (dir + 3) % 4
                    : std::countr_zero(static_cast<unsigned>(here));
          if (!(out[corner(cx, cy)] & (1 << dir))) break;
        }
        // Keep only midpoints where the boundary turns.
        std::vector<Point2> pts;
        for (std::size_t k = 0, n = mids.size(); k < n; ++k) {
          const Point2 a = mids[(k + n - 1) % n], b = mids[k], c = mids[(k + 1) % n];
          if (cross(b - a, c - b) != 0.0 || dot(b - a, c - b) <= 0.0) pts.push_back(b);
        }
        if (pts.size() >= 3) {
          Contour c;
          c.hole = signed_area(pts) < 0.0;
          c.points = std::move(pts);
          result.push_back(std::move(c));
        }
      }
    }
  }
  return result;
}

// -- simplification -------------------------------------------------------------

namespace detail {

inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len2 = dot(d, d);
  double t = len2 > 0 ? dot(p - a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * d);
}

/// Marks kept points of the open chain pts[i..j] (indices modulo n).
inline void douglas_peucker(const std::vector<Point2>& pts, std::size_t i, std::size_t j,
                            double eps, std::vector<char>& keep) {
  const std::size_t n = pts.size();
  const std::size_t span = (j + n - i) % n;
  if (span < 2) return;
  double best = -1.0;
  std::size_t best_k = i;
  for (std::size_t s = 1; s < span; ++s) {
    const std::size_t k = (i + s) % n;
    const double d = point_segment_distance(pts[k], pts[i], pts[j]);
    if (d > best) {
      best = d;
      best_k = k;
    }
  }
  if (best > eps) {
    keep[best_k] = 1;
    douglas_peucker(pts, i, best_k, eps, keep);
    douglas_peucker(pts, best_k, j, eps, keep);
  }
}

}  // namespace detail

/// Closed-loop Douglas-Peucker anchored at the lexicographically smallest
/// vertex and the vertex farthest from it. A point survives only when its
/// distance to the current chord exceeds `eps`.
inline Contour simplify(const Contour& c, double eps = kDefaultSimplifyEpsilon) {
  if (!(eps >= 0.0)) throw ParamOutOfRange("simplify: epsilon must be >= 0");
  const auto& pts = c.points;
  const std::size_t n = pts.size();
  if (n < 3) throw DegenerateResult("simplify: contour has fewer than 3 vertices");
  std::size_t a = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (pts[k].x < pts[a].x || (pts[k].x == pts[a].x && pts[k].y < pts[a].y)) a = k;
  }
  std::size_t b = a;
  double far = -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = distance(pts[k], pts[a]);
    if (d > far) {
      far = d;
      b = k;
    }
  }
  std::vector<char> keep(n, 0);
  keep[a] = keep[b] = 1;
  detail::douglas_peucker(pts, a, b, eps, keep);
  detail::douglas_peucker(pts, b, a, eps, keep);
  Contour out;
  out.hole = c.hole;
  for (std::size_t k = 0; k < n; ++k) {
    if (keep[k]) out.points.push_back(pts[k]);
  }
  if (out.points.size() < 3) {
    throw DegenerateResult("simplify: only " + std::to_string(out.points.size()) +
                           " vertices would remain");
  }
  return out;
}

// -- quantization -----------------------------------------------------------------

inline int quantize_coord(double v, int extent_px) {
  if (extent_px <= 1) return 0;
  const double q = std::floor(v * (kQuantLevels - 1) / (extent_px - 1) + 0.5);
  return static_cast<int>(std::clamp(q, 0.0, static_cast<double>(kQuantLevels - 1)));
}

inline double dequantize_coord(int q, int extent_px) {
  if (extent_px <= 1) return 0.0;
  return static_cast<double>(q) * (extent_px - 1) / (kQuantLevels - 1);
}

/// Scales to [0, 255] per axis; consecutive duplicates are merged while more
/// than three vertices remain.
inline QuantizedPolygon quantize(const Contour& c, int width_px, int height_px) {
  QuantizedPolygon q;
  for (const auto& p : c.points) {
    q.vertices.push_back({quantize_coord(p.x, width_px), quantize_coord(p.y, height_px)});
  }
  auto& v = q.vertices;
  for (std::size_t i = 0; v.size() > 3 && i < v.size();) {
    if (v[i] == v[(i + 1) % v.size()]) {
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  return q;
}

inline Contour dequantize(const QuantizedPolygon& q, int width_px, int height_px) {
  Contour c;
  for (const auto& v : q.vertices) {
    c.points.push_back({dequantize_coord(v[0], width_px), dequantize_coord(v[1], height_px)});
  }
  c.hole = signed_area(c.points) < 0.0;
  return c;
}

// -- tokens ------------------------------------------------------------------------

inline constexpr std::string_view kSegOpen = "<seg>";
inline constexpr std::string_view kSegClose = "</seg>";

enum class MalformedReason {
  UnbalancedDelimiters,
  OddCoordinateCount,
  OutOfRange,
  NonInteger,
  TooFewVertices,
};

constexpr std::string_view to_string(MalformedReason r) {
  switch (r) {
    case MalformedReason::UnbalancedDelimiters: return "unbalanced_delimiters";
    case MalformedReason::OddCoordinateCount: return "odd_coordinate_count";
    case MalformedReason::OutOfRange: return "out_of_range";
    case MalformedReason::NonInteger: return "non_integer";
    case MalformedReason::TooFewVertices: return "too_few_vertices";
  }
  return "unknown";
}

class MalformedSequence : public Error {
 public:
  MalformedSequence(MalformedReason reason, const std::string& detail)
      : Error("malformed token sequence (" + std::string(to_string(reason)) + "): " + detail),
        reason_(reason) {}
  MalformedReason reason() const { return reason_; }

 private:
  MalformedReason reason_;
};

inline std::string encode_tokens(const std::vector<QuantizedPolygon>& polys) {
  std::string out;
  for (const auto& p : polys) {
    if (p.vertices.empty()) throw ParamOutOfRange("encode_tokens: polygon without vertices");
    if (!out.empty()) out += ' ';
    out += kSegOpen;
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
      out += i == 0 ? " " : ", ";
      out += std::to_string(p.vertices[i][0]) + "," + std::to_string(p.vertices[i][1]);
    }
    out += ' ';
    out += kSegClose;
  }
  return out;
}

/// Coordinate tokens plus two delimiters per polygon.
inline std::size_t polygon_token_count(const std::vector<QuantizedPolygon>& polys) {
  std::size_t n = 0;
  for (const auto& p : polys) n += 2 * p.vertices.size() + 2;
  return n;
}

/// Parses `<seg> x,y, x,y, ... </seg>` blocks. Whitespace is free-form;
/// commas and whitespace both separate coordinates.
inline std::vector<QuantizedPolygon> decode_tokens(std::string_view text) {
  std::vector<QuantizedPolygon> out;
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  std::size_t i = 0;
  const auto skip_space = [&] {
    while (i < text.size() && is_space(text[i])) ++i;
  };
  skip_space();
  while (i < text.size()) {
    if (text.substr(i, kSegOpen.size()) != kSegOpen) {
      throw MalformedSequence(MalformedReason::UnbalancedDelimiters,
                              "expected <seg> at offset " + std::to_string(i));
    }
    i += kSegOpen.size();
    const std::size_t close = text.find(kSegClose, i);
    const std::size_t reopen = text.find(kSegOpen, i);
    if (close == std::string_view::npos || (reopen != std::string_view::npos && reopen < close)) {
      throw MalformedSequence(MalformedReason::UnbalancedDelimiters, "<seg> without </seg>");
    }
    const std::string_view body = text.substr(i, close - i);
    std::vector<int> coords;
    std::size_t k = 0;
    while (k < body.size()) {
      if (is_space(body[k]) || body[k] == ',') {
        ++k;
        continue;
      }
      std::size_t e = k;
      while (e < body.size() && !is_space(body[e]) && body[e] != ',') ++e;
      const std::string_view tok = body.substr(k, e - k);
      if (tok.find('<') != std::string_view::npos || tok.find('>') != std::string_view::npos) {
        throw MalformedSequence(MalformedReason::UnbalancedDelimiters,
                                "stray delimiter '" + std::string(tok) + "'");
      }
      const std::size_t digits_from = tok[0] == '-' ? 1 : 0;
      const bool integer =
          tok.size() > digits_from &&
          std::all_of(tok.begin() + static_cast<std::ptrdiff_t>(digits_from), tok.end(),
                      [](char c) { return c >= '0' && c <= '9'; });
      if (!integer) {
        throw MalformedSequence(MalformedReason::NonInteger, "token '" + std::string(tok) + "'");
      }
      long long v = 0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || v < 0 || v >= kQuantLevels) {
        throw MalformedSequence(MalformedReason::OutOfRange, "token '" + std::string(tok) + "'");
      }
      coords.push_back(static_cast<int>(v));
      k = e;
    }
    if (coords.size() % 2 != 0) {
      throw MalformedSequence(MalformedReason::OddCoordinateCount,
                              std::to_string(coords.size()) + " coordinates");
    }
    if (coords.size() < 6) {
      throw MalformedSequence(MalformedReason::TooFewVertices,
                              std::to_string(coords.size() / 2) + " vertices");
    }
    QuantizedPolygon p;
    for (std::size_t c = 0; c < coords.size(); c += 2) p.vertices.push_back({coords[c], coords[c + 1]});
    out.push_back(std::move(p));
    i = close + kSegClose.size();
    skip_space();
  }
  return out;
}

// -- rasterization ---------------------------------------------------------------

namespace detail {

/// Pixel centres on the closed segment ab.
inline void mark_segment_points(BinaryMask& m, Point2 a, Point2 b) {
  constexpr double kEps = 1e-9;
  const bool steep = std::abs(b.y - a.y) > std::abs(b.x - a.x);
  const double u0 = steep ? a.y : a.x, u1 = steep ? b.y : b.x;
  const double v0 = steep ? a.x : a.y, v1 = steep ? b.x : b.y;
  const double lo = std::min(u0, u1), hi = std::max(u0, u1);
  for (long long u = static_cast<long long>(std::ceil(lo - kEps));
       static_cast<double>(u) <= hi + kEps; ++u) {
    const double t = hi > lo ? (static_cast<double>(u) - u0) / (u1 - u0) : 0.0;
    const double v = v0 + t * (v1 - v0);
    const double rv = std::round(v);
    if (std::abs(v - rv) > kEps) continue;
    const int x = static_cast<int>(steep ? rv : static_cast<double>(u));
    const int y = static_cast<int>(steep ? static_cast<double>(u) : rv);
    if (m.in_bounds(x, y)) m.set(x, y);
  }
}

/// One-pixel line through rounded sample points along ab.
inline void draw_thin_line(BinaryMask& m, Point2 a, Point2 b) {
  const int steps = static_cast<int>(std::ceil(std::max(std::abs(b.x - a.x), std::abs(b.y - a.y))));
  for (int s = 0; s <= steps; ++s) {
    const double t = steps ? static_cast<double>(s) / steps : 0.0;
    const int x = static_cast<int>(std::floor(a.x + t * (b.x - a.x) + 0.5));
    const int y = static_cast<int>(std::floor(a.y + t * (b.y - a.y) + 0.5));
    if (m.in_bounds(x, y)) m.set(x, y);
  }
}

}  // namespace detail

/// Even-odd fill of pixel-space loops, evaluated jointly over all loops so
/// holes cut their outers; pixel centres on a boundary are included.
inline void fill_loops_even_odd(BinaryMask& m, const std::vector<std::vector<Point2>>& loops) {
  const int W = m.width(), H = m.height();
  std::vector<double> xs;
  for (int y = 0; y < H; ++y) {
    xs.clear();
    const double fy = y;
    for (const auto& loop : loops) {
      for (std::size_t i = 0, n = loop.size(); i < n; ++i) {
        const Point2 a = loop[i], b = loop[(i + 1) % n];
        if ((a.y <= fy && fy < b.y) || (b.y <= fy && fy < a.y)) {
          xs.push_back(a.x + (fy - a.y) / (b.y - a.y) * (b.x - a.x));
        }
      }
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const int x0 = std::max(0, static_cast<int>(std::ceil(xs[k])));
      const int x1 = std::min(W - 1, static_cast<int>(std::floor(xs[k + 1])));
      for (int x = x0; x <= x1; ++x) m.set(x, y);
    }
  }
  for (const auto& loop : loops) {
    for (std::size_t i = 0, n = loop.size(); i < n; ++i) {
      detail::mark_segment_points(m, loop[i], loop[(i + 1) % n]);
    }
  }
}

inline bool is_degenerate(const std::vector<Point2>& pts) {
  std::vector<Point2> distinct;
  for (const auto& p : pts) {
    if (std::find(distinct.begin(), distinct.end(), p) == distinct.end()) distinct.push_back(p);
  }
  return distinct.size() < 3 || std::abs(signed_area(pts)) < 1e-12;
}

/// Decoded polygons to a mask. Degenerate polygons are drawn as their
/// one-pixel stroke.
inline BinaryMask rasterize_polygons(const std::vector<QuantizedPolygon>& polys, int width_px,
                                     int height_px) {
  if (width_px < 1 || height_px < 1) throw DimensionMismatch("rasterize_polygons: empty frame");
  BinaryMask m(width_px, height_px);
  std::vector<std::vector<Point2>> loops;
  for (const auto& q : polys) {
    const auto pts = dequantize(q, width_px, height_px).points;
    if (is_degenerate(pts)) {
      for (std::size_t i = 0, n = pts.size(); i < n; ++i) {
        detail::draw_thin_line(m, pts[i], pts[(i + 1) % n]);
      }
    } else {
      loops.push_back(pts);
    }
  }
  fill_loops_even_odd(m, loops);
  return m;
}

// -- mask <-> tokens -----------------------------------------------------------------

/// Contours simplified with `eps` (the original loop is kept when
/// simplification degenerates) and quantized to the image frame.
inline std::vector<QuantizedPolygon> mask_to_polygons(const BinaryMask& m,
                                                      double eps = kDefaultSimplifyEpsilon) {
  std::vector<QuantizedPolygon> out;
  for (const auto& c : extract_contours(m)) {
    Contour s;
    try {
      s = simplify(c, eps);
    } catch (const DegenerateResult&) {
      s = c;
    }
    out.push_back(quantize(s, m.width(), m.height()));
  }
  return out;
}

inline std::string mask_to_tokens(const BinaryMask& m, double eps = kDefaultSimplifyEpsilon) {
  return encode_tokens(mask_to_polygons(m, eps));
}

inline BinaryMask tokens_to_mask(std::string_view tokens, int width_px, int height_px) {
  return rasterize_polygons(decode_tokens(tokens), width_px, height_px);
}

// -- run-length baseline ---------------------------------------------------------------

struct RleMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> runs;  // starts with a background run

  std::size_t token_count() const { return runs.size(); }
};

inline RleMask rle_encode(const BinaryMask& m) {
  RleMask r{m.width(), m.height(), {}};
  std::uint8_t current = 0;
  std::uint32_t run = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] != current) {
      r.runs.push_back(run);
      run = 0;
      current = m[i];
    }
    ++run;
  }
  r.runs.push_back(run);
  return r;
}

inline BinaryMask rle_decode(const RleMask& r) {
  BinaryMask m(r.width, r.height);
  std::size_t pos = 0;
  std::uint8_t v = 0;
  for (auto run : r.runs) {
    if (pos + run > m.size()) throw DimensionMismatch("rle_decode: runs exceed frame");
    for (std::uint32_t k = 0; k < run; ++k) m[pos++] = v;
    v ^= 1;
  }
  if (pos != m.size()) throw DimensionMismatch("rle_decode: runs do not cover frame");
  return m;
}

}  // namespace geomforge
