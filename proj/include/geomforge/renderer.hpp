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

// Deterministic scene rasterizer with dual-pass mask extraction.
//
// Every element is sampled on an S x S subpixel grid and its coverage kept
// as one bit per subsample. The main pass paints the union of all coverage
// in ink; the mask pass paints the same union, with the target's subsamples
// in the highlight colour on top. Both passes therefore have identical
// support and differ only in colour. Pixel colour is the box-filtered mean
// of its subsamples.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "geomforge/error.hpp"
#include "geomforge/geom_core.hpp"
#include "geomforge/glyphs.hpp"
#include "geomforge/raster.hpp"
#include "geomforge/scene_graph.hpp"

namespace geomforge {

inline constexpr double kDefaultTau = 50.0;
inline constexpr double kMiterLimit = 4.0;

struct RenderStyle {
  int dpi = 250;
  int supersample_factor = 4;
  Rgb ink = kBlack;
  Rgb background = kWhite;
  Rgb highlight = kRed;
  int max_dim = 4096;

  void validate() const {
    if (dpi < 72 || dpi > 600) throw ParamOutOfRange("RenderStyle: dpi must lie in [72, 600]");
    if (supersample_factor < 1 || supersample_factor > 8) {
      throw ParamOutOfRange("RenderStyle: supersample_factor must lie in [1, 8]");
    }
  }
};

/// World (cm, y up) to pixel (y down) mapping for a scene at a given DPI.
struct PixelFrame {
  int width = 0;
  int height = 0;
  double scale = 0.0;  // pixels per world unit
  double min_x = 0.0;
  double max_y = 0.0;

  Point2 to_px(Point2 w) const { return {(w.x - min_x) * scale, (max_y - w.y) * scale}; }
};

inline PixelFrame pixel_frame(const Scene& scene, const RenderStyle& style) {
  style.validate();
  PixelFrame f;
  f.scale = style.dpi / kCmPerInch;
  f.min_x = scene.canvas.min_x;
  f.max_y = scene.canvas.max_y;
  f.width = static_cast<int>(std::llround(scene.canvas.width() / kCmPerInch * style.dpi));
  f.height = static_cast<int>(std::llround(scene.canvas.height() / kCmPerInch * style.dpi));
  if (f.width > style.max_dim || f.height > style.max_dim) {
    throw CanvasOverflow("render: " + std::to_string(f.width) + "x" + std::to_string(f.height) +
                         " px exceeds cap of " + std::to_string(style.max_dim));
  }
  return f;
}

/// Pixel is on iff R - G/2 - B/2 > tau.
inline BinaryMask channel_mask(const RasterImage& img, double tau = kDefaultTau) {
  BinaryMask m(img.width(), img.height());
  const auto& px = img.bytes();
  for (std::size_t i = 0, n = m.size(); i < n; ++i) {
    const double v = px[3 * i] - px[3 * i + 1] / 2.0 - px[3 * i + 2] / 2.0;
    m[i] = v > tau ? 1 : 0;
  }
  return m;
}

namespace detail {

using CoverageBits = std::uint64_t;
using SparseCoverage = std::vector<std::pair<std::uint32_t, CoverageBits>>;

/// Dense scratch buffer that records which pixels were touched so it can
/// be drained into a sparse list and cleared cheaply.
class CoverageSink {
 public:
  CoverageSink(int width, int height, int s)
      : width_(width), height_(height), s_(s),
        buf_(static_cast<std::size_t>(width) * height, 0) {
    full_ = s * s == 64 ? ~CoverageBits{0} : (CoverageBits{1} << (s * s)) - 1;
    for (int k = 0; k < s; ++k) offsets_.push_back((k + 0.5) / s);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int s() const { return s_; }
  CoverageBits full() const { return full_; }
  double offset(int k) const { return offsets_[static_cast<std::size_t>(k)]; }

  void add(int x, int y, CoverageBits b) {
    if (!b) return;
    const auto i = static_cast<std::uint32_t>(y * width_ + x);
    if (!buf_[i]) touched_.push_back(i);
    buf_[i] |= b;
  }

  template <class Inside>
  void sample_pixel(int x, int y, Inside&& inside) {
    CoverageBits bits = 0;
    int k = 0;
    for (int sy = 0; sy < s_; ++sy) {
      for (int sx = 0; sx < s_; ++sx, ++k) {
        if (inside(x + offsets_[sx], y + offsets_[sy])) bits |= CoverageBits{1} << k;
      }
    }
    add(x, y, bits);
  }

  SparseCoverage drain() {
    std::sort(touched_.begin(), touched_.end());
    SparseCoverage out;
    out.reserve(touched_.size());
    for (auto i : touched_) {
      out.emplace_back(i, buf_[i]);
      buf_[i] = 0;
    }
    touched_.clear();
    return out;
  }

 private:
  int width_, height_, s_;
  CoverageBits full_ = 0;
  std::vector<double> offsets_;
  std::vector<CoverageBits> buf_;
  std::vector<std::uint32_t> touched_;
};

inline constexpr double kHalfDiagonal = 0.70710678118654752;

inline double dist2_to_segment(double px, double py, Point2 a, Point2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((px - a.x) * dx + (py - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = px - (a.x + t * dx), ey = py - (a.y + t * dy);
  return ex * ex + ey * ey;
}

/// Points within `r` of segment ab (round caps), pixel space.
inline void raster_capsule(CoverageSink& sink, Point2 a, Point2 b, double r) {
  const int H = sink.height(), W = sink.width();
  const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - r)));
  const int y1 = std::min(H - 1, static_cast<int>(std::floor(std::max(a.y, b.y) + r)));
  const double dy = b.y - a.y;
  const double r2 = r * r;
  const double inner = r - kHalfDiagonal, outer = r + kHalfDiagonal;
  for (int j = y0; j <= y1; ++j) {
    double xa, xb;
    if (std::abs(dy) < 1e-12) {
      xa = std::min(a.x, b.x);
      xb = std::max(a.x, b.x);
    } else {
      double t0 = (j - r - a.y) / dy, t1 = (j + 1 + r - a.y) / dy;
      if (t0 > t1) std::swap(t0, t1);
      t0 = std::max(t0, 0.0);
      t1 = std::min(t1, 1.0);
      if (t0 > t1) continue;
      const double x0 = a.x + t0 * (b.x - a.x), x1 = a.x + t1 * (b.x - a.x);
      xa = std::min(x0, x1);
      xb = std::max(x0, x1);
    }
    const int i0 = std::max(0, static_cast<int>(std::floor(xa - r)));
    const int i1 = std::min(W - 1, static_cast<int>(std::floor(xb + r)));
    for (int i = i0; i <= i1; ++i) {
      const double dc = std::sqrt(dist2_to_segment(i + 0.5, j + 0.5, a, b));
      if (dc > outer) continue;
      if (dc <= inner) {
        sink.add(i, j, sink.full());
        continue;
      }
      sink.sample_pixel(i, j, [&](double x, double y) { return dist2_to_segment(x, y, a, b) <= r2; });
    }
  }
}

/// Points whose distance to `c` lies in [ri, ro], pixel space.
inline void raster_annulus(CoverageSink& sink, Point2 c, double ri, double ro) {
  const int H = sink.height(), W = sink.width();
  ri = std::max(ri, 0.0);
  const double ri2 = ri * ri, ro2 = ro * ro;
  const int y0 = std::max(0, static_cast<int>(std::floor(c.y - ro)));
  const int y1 = std::min(H - 1, static_cast<int>(std::floor(c.y + ro)));
  const auto visit = [&](int i, int j) {
    const double dc = std::hypot(i + 0.5 - c.x, j + 0.5 - c.y);
    if (dc - kHalfDiagonal > ro || dc + kHalfDiagonal < ri) return;
    if (dc - kHalfDiagonal >= ri && dc + kHalfDiagonal <= ro) {
      sink.add(i, j, sink.full());
      return;
    }
    sink.sample_pixel(i, j, [&](double x, double y) {
      const double d2 = (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y);
      return d2 >= ri2 && d2 <= ro2;
    });
  };
  for (int j = y0; j <= y1; ++j) {
    const double dy_min = c.y < j ? j - c.y : (c.y > j + 1 ? c.y - (j + 1) : 0.0);
    if (dy_min > ro) continue;
    const double half = std::sqrt(ro2 - dy_min * dy_min);
    const int i0 = std::max(0, static_cast<int>(std::floor(c.x - half)));
    const int i1 = std::min(W - 1, static_cast<int>(std::floor(c.x + half)));
    // Pixels entirely inside the hole are skipped.
    int skip0 = i1 + 1, skip1 = i1;
    const double dy_max = std::max(std::abs(j - c.y), std::abs(j + 1 - c.y));
    if (ri > dy_max) {
      const double ih = std::sqrt(ri2 - dy_max * dy_max);
      skip0 = static_cast<int>(std::ceil(c.x - ih));
      skip1 = static_cast<int>(std::floor(c.x + ih)) - 1;
    }
    for (int i = i0; i <= i1; ++i) {
      if (i >= skip0 && i <= skip1) {
        i = skip1;
        continue;
      }
      visit(i, j);
    }
  }
}

/// Convex polygon fill (either orientation), pixel space.
inline void raster_convex(CoverageSink& sink, std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  double area2 = 0;
  double miny = poly[0].y, maxy = poly[0].y;
  for (std::size_t k = 0; k < n; ++k) {
    area2 += cross(poly[k], poly[(k + 1) % n]);
    miny = std::min(miny, poly[k].y);
    maxy = std::max(maxy, poly[k].y);
  }
  if (std::abs(area2) < 1e-12) return;
  const double orient = area2 > 0 ? 1.0 : -1.0;
  // Inward unit normals as (nx, ny, c): signed distance = nx*x + ny*y - c.
  std::vector<std::array<double, 3>> planes;
  for (std::size_t k = 0; k < n; ++k) {
    const Point2 a = poly[k], b = poly[(k + 1) % n];
    const double len = distance(a, b);
    if (len < 1e-12) continue;
    const double nx = -(b.y - a.y) / len * orient, ny = (b.x - a.x) / len * orient;
    planes.push_back({nx, ny, nx * a.x + ny * a.y});
  }
  const auto inside = [&](double x, double y) {
    for (const auto& p : planes) {
      if (p[0] * x + p[1] * y - p[2] < 0) return false;
    }
    return true;
  };
  const int j0 = std::max(0, static_cast<int>(std::floor(miny)));
  const int j1 = std::min(sink.height() - 1, static_cast<int>(std::floor(maxy)));
  for (int j = j0; j <= j1; ++j) {
    // x-extent of the polygon clipped to the row band [j, j + 1].
    double xa = 1e300, xb = -1e300;
    for (std::size_t k = 0; k < n; ++k) {
      const Point2 a = poly[k], b = poly[(k + 1) % n];
      double t0 = 0.0, t1 = 1.0;
      const double dy = b.y - a.y;
      if (std::abs(dy) < 1e-12) {
        if (a.y < j || a.y > j + 1) continue;
      } else {
        double u0 = (j - a.y) / dy, u1 = (j + 1 - a.y) / dy;
        if (u0 > u1) std::swap(u0, u1);
        t0 = std::max(t0, u0);
        t1 = std::min(t1, u1);
        if (t0 > t1) continue;
      }
      const double x0 = a.x + t0 * (b.x - a.x), x1 = a.x + t1 * (b.x - a.x);
      xa = std::min({xa, x0, x1});
      xb = std::max({xb, x0, x1});
    }
    if (xa > xb) continue;
    const int i0 = std::max(0, static_cast<int>(std::floor(xa)));
    const int i1 = std::min(sink.width() - 1, static_cast<int>(std::floor(xb)));
    for (int i = i0; i <= i1; ++i) {
      const double cx = i + 0.5, cy = j + 0.5;
      double worst = 1e300;
      for (const auto& p : planes) worst = std::min(worst, p[0] * cx + p[1] * cy - p[2]);
      if (worst < -kHalfDiagonal) continue;
      if (worst >= kHalfDiagonal) {
        sink.add(i, j, sink.full());
        continue;
      }
      sink.sample_pixel(i, j, inside);
    }
  }
}

/// Closed polyline stroked with butt edges and miter joins (bevel past the
/// miter limit), in world space; rasterized through `frame`.
inline void raster_outline(CoverageSink& sink, const PixelFrame& frame,
                           const std::array<Point2, 4>& pts, double hw) {
  double area2 = 0;
  for (std::size_t i = 0; i < 4; ++i) area2 += cross(pts[i], pts[(i + 1) % 4]);
  const double side = area2 >= 0 ? 1.0 : -1.0;
  const auto outward = [&](Point2 a, Point2 b) {
    const Point2 d = normalized(b - a);
    return Point2{d.y * side, -d.x * side};
  };
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2 a = pts[i], b = pts[(i + 1) % 4], c = pts[(i + 2) % 4];
    const Point2 n1 = outward(a, b);
    const std::array<Point2, 4> rect{frame.to_px(a + hw * n1), frame.to_px(b + hw * n1),
                                     frame.to_px(b - hw * n1), frame.to_px(a - hw * n1)};
    raster_convex(sink, rect);

    const Point2 n2 = outward(b, c);
    const Point2 p1 = b + hw * n1, p2 = b + hw * n2;
    const double cos_half = std::sqrt(std::max(0.0, (1.0 + dot(n1, n2)) / 2.0));
    if (cos_half > 1e-9 && 1.0 / cos_half <= kMiterLimit) {
      const Point2 tip = b + normalized(n1 + n2) * (hw / cos_half);
      const std::array<Point2, 4> join{frame.to_px(b), frame.to_px(p1), frame.to_px(tip),
                                       frame.to_px(p2)};
      raster_convex(sink, join);
    } else {
      const std::array<Point2, 3> bevel{frame.to_px(b), frame.to_px(p1), frame.to_px(p2)};
      raster_convex(sink, bevel);
    }
  }
}

inline void raster_label(CoverageSink& sink, const PixelFrame& frame, const TextLabel& t) {
  const WorldRect box = label_box(t);
  const double unit = kLabelCapHeight / kGlyphGridHeight;
  const double r = kLabelStroke / 2 * frame.scale;
  for (std::size_t k = 0; k < t.text.size(); ++k) {
    const Point2 origin{box.min_x + static_cast<double>(k) * kLabelAdvance, box.min_y};
    for (const auto& stroke : glyph_strokes(t.text[k])) {
      for (std::size_t s = 0; s + 1 < stroke.size(); ++s) {
        raster_capsule(sink, frame.to_px(origin + unit * stroke[s]),
                       frame.to_px(origin + unit * stroke[s + 1]), r);
      }
    }
  }
}

inline void raster_element(CoverageSink& sink, const PixelFrame& frame,
                           const SceneElement& e, double stroke_width) {
  const double hw = stroke_width / 2;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Segment>) {
          raster_capsule(sink, frame.to_px(p.p1), frame.to_px(p.p2), hw * frame.scale);
        } else if constexpr (std::is_same_v<T, Circle>) {
          raster_annulus(sink, frame.to_px(p.center), (p.radius - hw) * frame.scale,
                         (p.radius + hw) * frame.scale);
        } else if constexpr (std::is_same_v<T, Dot>) {
          raster_annulus(sink, frame.to_px(p.p), 0.0, kDotRadius * frame.scale);
        } else if constexpr (std::is_same_v<T, TextLabel>) {
          raster_label(sink, frame, p);
        } else {
          raster_outline(sink, frame, p.points, hw);
        }
      },
      e.primitive);
}

inline std::uint8_t mix_channel(std::uint8_t hl, std::uint8_t ink, std::uint8_t bg, int n_hl,
                                int n_ink, int n) {
  const int sum = hl * n_hl + ink * n_ink + bg * (n - n_hl - n_ink);
  return static_cast<std::uint8_t>((sum + n / 2) / n);
}

}  // namespace detail

/// Rasterizes a scene once and serves both the main pass and any number of
/// mask passes from the cached per-element coverage.
class SceneRasterizer {
 public:
  SceneRasterizer(const Scene& scene, const RenderStyle& style)
      : style_(style), frame_(pixel_frame(scene, style)) {
    const int s = style.supersample_factor;
    samples_ = s * s;
    detail::CoverageSink sink(frame_.width, frame_.height, s);
    union_.assign(static_cast<std::size_t>(frame_.width) * frame_.height, 0);
    for (const auto& e : scene.elements) {
      detail::raster_element(sink, frame_, e, scene.stroke_width);
      auto cov = sink.drain();
      for (const auto& [i, bits] : cov) union_[i] |= bits;
      ids_.push_back(e.id);
      coverage_.push_back(std::move(cov));
    }
    main_ = RasterImage(frame_.width, frame_.height, style.background);
    for (std::size_t i = 0; i < union_.size(); ++i) {
      if (!union_[i]) continue;
      paint(main_, i, 0, std::popcount(union_[i]));
    }
  }

  const PixelFrame& frame() const { return frame_; }
  int width() const { return frame_.width; }
  int height() const { return frame_.height; }

  /// Main pass: all elements in ink on the background.
  const RasterImage& image() const { return main_; }

  /// Mask pass: `target` in the highlight colour on top, all else in ink.
  RasterImage highlight_image(const ElementId& target) const {
    const auto& cov = coverage_of(target);
    RasterImage img = main_;
    for (const auto& [i, bits] : cov) {
      paint(img, i, std::popcount(bits), std::popcount(union_[i] & ~bits));
    }
    return img;
  }

  BinaryMask mask(const ElementId& target, double tau = kDefaultTau) const {
    return channel_mask(highlight_image(target), tau);
  }

 private:
  const detail::SparseCoverage& coverage_of(const ElementId& id) const {
    for (std::size_t k = 0; k < ids_.size(); ++k) {
      if (ids_[k] == id) return coverage_[k];
    }
    throw InvalidElementId("render: target " + id.str() + " not in scene");
  }

  void paint(RasterImage& img, std::size_t i, int n_hl, int n_ink) const {
    auto& px = img.bytes();
    const Rgb hl = style_.highlight, ink = style_.ink, bg = style_.background;
    px[3 * i] = detail::mix_channel(hl.r, ink.r, bg.r, n_hl, n_ink, samples_);
    px[3 * i + 1] = detail::mix_channel(hl.g, ink.g, bg.g, n_hl, n_ink, samples_);
    px[3 * i + 2] = detail::mix_channel(hl.b, ink.b, bg.b, n_hl, n_ink, samples_);
  }

  RenderStyle style_;
  PixelFrame frame_;
  int samples_ = 16;
  std::vector<ElementId> ids_;
  std::vector<detail::SparseCoverage> coverage_;
  std::vector<detail::CoverageBits> union_;
  RasterImage main_;
};

inline RasterImage render_scene(const Scene& scene, const RenderStyle& style) {
  return SceneRasterizer(scene, style).image();
}

inline BinaryMask render_mask(const Scene& scene, const Target& target, const RenderStyle& style,
                              double tau = kDefaultTau) {
  return SceneRasterizer(scene, style).mask(target.element_id, tau);
}

// -- TikZ ----------------------------------------------------------------------

namespace detail {

inline std::string fmt4(double v) {
  if (std::abs(v) < 5e-5) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline std::string fmt_point(Point2 p) { return "(" + fmt4(p.x) + ", " + fmt4(p.y) + ")"; }

}  // namespace detail

/// Standalone TikZ document for a scene. With `highlight`, that element is
/// drawn red and last, mirroring the mask pass.
inline std::string emit_tikz(const Scene& scene,
                             const std::optional<ElementId>& highlight = std::nullopt) {
  std::map<std::string, Point2> named;
  std::string out;
  out += "\\documentclass{standalone}\n";
  out += "\\usepackage{tikz}\n";
  out += "\\usetikzlibrary{angles, quotes}\n";
  out += "\\usepackage{tkz-euclide}\n\n";
  out += "\\begin{document}\n";
  out += "\\begin{tikzpicture}\n";
  for (const auto& e : scene.elements) {
    if (const auto* t = std::get_if<TextLabel>(&e.primitive)) {
      if (named.emplace(t->text, t->anchor).second) {
        out += "  \\coordinate (" + t->text + ") at " + detail::fmt_point(t->anchor) + ";\n";
      }
    }
  }
  out += "\n";
  const auto ref = [&](Point2 p) {
    for (const auto& [name, q] : named) {
      if (q == p) return "(" + name + ")";
    }
    return detail::fmt_point(p);
  };
  const auto emit = [&](const SceneElement& e, const char* color) {
    const std::string style = std::string("[thick, ") + color + "]";
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Segment>) {
            out += "  \\draw" + style + " " + ref(p.p1) + " -- " + ref(p.p2) + ";\n";
          } else if constexpr (std::is_same_v<T, Circle>) {
            out += "  \\draw" + style + " " + detail::fmt_point(p.center) + " circle (" +
                   detail::fmt4(p.radius) + ");\n";
          } else if constexpr (std::is_same_v<T, Dot>) {
            out += "  \\fill[" + std::string(color) + "] " + ref(p.p) + " circle (" +
                   detail::fmt4(kDotRadius) + ");\n";
          } else if constexpr (std::is_same_v<T, TextLabel>) {
            out += "  \\node[" + std::string(to_string(p.placement)) + "] at " + ref(p.anchor) +
                   " {" + p.text + "};\n";
          } else {
            out += "  \\draw" + style;
            for (const auto& q : p.points) out += " " + ref(q) + " --";
            out += " cycle;\n";
          }
        },
        e.primitive);
  };
  for (const auto& e : scene.elements) {
    if (!(highlight && e.id == *highlight)) emit(e, "black");
  }
  if (highlight) {
    const auto* e = scene.find(*highlight);
    if (!e) throw InvalidElementId("emit_tikz: highlight " + highlight->str() + " not in scene");
    emit(*e, "red");
  }
  out += "\\end{tikzpicture}\n";
  out += "\\end{document}\n";
  return out;
}

}  // namespace geomforge
