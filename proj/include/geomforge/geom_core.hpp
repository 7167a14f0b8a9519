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

// Analytic construction and validation of the seven quadrilateral families.
//
// Every family is built so that its defining constraint holds by
// construction; validation only rejects configurations that are degenerate
// (non-convex, near-collinear, out of bounds). Rejected draws are resampled
// with fresh random numbers, never repaired.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geomforge/error.hpp"
#include "geomforge/rng.hpp"

namespace geomforge {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend constexpr Point2 operator*(Point2 p, double s) { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point2, Point2) = default;

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 normalized(Point2 a) {
  const double n = norm(a);
  return {a.x / n, a.y / n};
}

/// Absolute area of triangle (a, b, c).
inline double triangle_area(Point2 a, Point2 b, Point2 c) {
  return 0.5 * std::abs(cross(b - a, c - a));
}

/// Line a*x + b*y = c with (a, b) a unit normal.
struct LineEq {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;

  static LineEq make(double a, double b, double c) {
    const double n = std::hypot(a, b);
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw ParamOutOfRange("LineEq: (a, b) must be a non-zero finite vector");
    }
    return {a / n, b / n, c / n};
  }

  /// Line through `p` with direction `dir`.
  static LineEq through(Point2 p, Point2 dir) {
    const LineEq l = make(-dir.y, dir.x, 0.0);
    return {l.a, l.b, l.a * p.x + l.b * p.y};
  }

  double signed_distance(Point2 p) const { return a * p.x + b * p.y - c; }
  Point2 direction() const { return {b, -a}; }
};

enum class ShapeKind {
  Parallelogram,
  Rectangle,
  Trapezoid,
  IsoscelesTrapezoid,
  Rhombus,
  Square,
  TangentialQuad,
};

inline constexpr std::array<ShapeKind, 7> kAllShapeKinds = {
    ShapeKind::Parallelogram, ShapeKind::Rectangle,          ShapeKind::Trapezoid,
    ShapeKind::IsoscelesTrapezoid, ShapeKind::Rhombus,       ShapeKind::Square,
    ShapeKind::TangentialQuad};

constexpr std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Parallelogram: return "parallelogram";
    case ShapeKind::Rectangle: return "rectangle";
    case ShapeKind::Trapezoid: return "trapezoid";
    case ShapeKind::IsoscelesTrapezoid: return "isosceles_trapezoid";
    case ShapeKind::Rhombus: return "rhombus";
    case ShapeKind::Square: return "square";
    case ShapeKind::TangentialQuad: return "tangential_quad";
  }
  return "unknown";
}

/// Human-readable noun used in referring expressions.
constexpr std::string_view shape_noun(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Parallelogram: return "parallelogram";
    case ShapeKind::Rectangle: return "rectangle";
    case ShapeKind::Trapezoid: return "trapezoid";
    case ShapeKind::IsoscelesTrapezoid: return "isosceles trapezoid";
    case ShapeKind::Rhombus: return "rhombus";
    case ShapeKind::Square: return "square";
    case ShapeKind::TangentialQuad: return "tangential quadrilateral";
  }
  return "quadrilateral";
}

inline std::optional<ShapeKind> parse_shape_kind(std::string_view s) {
  for (ShapeKind k : kAllShapeKinds) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

struct TrapezoidParams {
  double base_len = 5.0;  // |AB|
  double ratio = 0.7;     // |CD| / |AB|
  double height = 4.0;
  double offset = 0.0;    // horizontal offset of the top side
};

struct Incircle {
  Point2 center;
  double radius = 0.0;
};

struct ShapeInstance {
  ShapeKind kind = ShapeKind::Parallelogram;
  std::array<Point2, 4> vertices{};  // counter-clockwise
  std::array<std::string, 4> labels{"A", "B", "C", "D"};
  std::optional<Incircle> incircle;
};

struct WorldRect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  bool contains(Point2 p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  WorldRect expanded(double m) const { return {min_x - m, min_y - m, max_x + m, max_y + m}; }
  void include(Point2 p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  static WorldRect around(Point2 p) { return {p.x, p.y, p.x, p.y}; }
};

inline constexpr double kCollinearAreaEps = 1e-6;   // world-units^2
inline constexpr double kEquationalTolerance = 1e-9;
inline constexpr double kTangencyTolerance = 1e-6;
inline constexpr double kParallelExclusivity = 1e-6;
inline constexpr int kMaxSampleAttempts = 100;

struct ValidationReport {
  bool convex = false;
  double min_triple_area = 0.0;
  bool in_bounds = false;
  /// Max deviation from the kind's defining equations; 0 when no kind given.
  double constraint_residual = 0.0;
  double residual_tolerance = kEquationalTolerance;
  /// Trapezoids only: the non-parallel pair is far from parallel.
  bool parallel_exclusive = true;

  bool accepted() const {
    return convex && min_triple_area > kCollinearAreaEps && in_bounds &&
           constraint_residual < residual_tolerance && parallel_exclusive;
  }
};

// -- primitives ------------------------------------------------------------

/// Unique intersection of two lines, or nullopt when |det| <= 1e-12.
inline std::optional<Point2> line_intersection(const LineEq& l1, const LineEq& l2) {
  const double det = l1.a * l2.b - l2.a * l1.b;
  if (std::abs(det) <= 1e-12) return std::nullopt;
  return Point2{(l1.c * l2.b - l2.c * l1.b) / det, (l1.a * l2.c - l2.a * l1.c) / det};
}

/// Interior bisector of the angle prev-vertex-next.
inline LineEq angle_bisector(Point2 prev, Point2 vertex, Point2 next) {
  if (triangle_area(prev, vertex, next) <= kCollinearAreaEps) {
    throw DegenerateAngle("angle_bisector: points are collinear");
  }
  const Point2 dir = normalized(normalized(prev - vertex) + normalized(next - vertex));
  return LineEq::through(vertex, dir);
}

/// Literal trapezoid construction: A=(0,0), B=(B,0), C=(d,h), D=(d+kB,h).
/// The points are returned in construction order, which is not a simple
/// polygon order; `sample_shape` reorders them.
inline std::array<Point2, 4> make_trapezoid(const TrapezoidParams& p) {
  const bool ok = p.base_len >= 3.0 && p.base_len <= 10.0 && p.ratio >= 0.5 &&
                  p.ratio <= 0.95 && p.height >= 3.0 && p.height <= 10.0 &&
                  p.offset >= -5.0 && p.offset <= 5.0;
  if (!ok) throw ParamOutOfRange("make_trapezoid: parameters outside sampling ranges");
  return {Point2{0.0, 0.0}, Point2{p.base_len, 0.0}, Point2{p.offset, p.height},
          Point2{p.offset + p.ratio * p.base_len, p.height}};
}

namespace detail {

/// Strict convex hull (Andrew's monotone chain), CCW, collinear points dropped.
template <std::size_t N>
inline std::vector<Point2> convex_hull(std::array<Point2, N> pts) {
  std::sort(pts.begin(), pts.end(),
            [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  std::vector<Point2> hull(2 * N);
  std::size_t k = 0;
  for (std::size_t i = 0; i < N; ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = N - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  return hull;
}

inline Point2 rotate(Point2 p, double c, double s) {
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

}  // namespace detail

/// Convexity, collinearity and bounds check. `constraint_residual` stays 0;
/// use the ShapeInstance overload for the per-kind residual.
inline ValidationReport validate(const std::array<Point2, 4>& v, const WorldRect& bounds) {
  ValidationReport r;
  r.min_triple_area = std::min({triangle_area(v[0], v[1], v[2]), triangle_area(v[0], v[1], v[3]),
                                triangle_area(v[0], v[2], v[3]), triangle_area(v[1], v[2], v[3])});
  r.in_bounds = std::all_of(v.begin(), v.end(),
                            [&](Point2 p) { return p.finite() && bounds.contains(p); });

  const auto hull = detail::convex_hull(v);
  if (hull.size() == 4) {
    // The input order must be a cyclic rotation of the CCW hull order.
    auto start = std::find(hull.begin(), hull.end(), v[0]);
    if (start != hull.end()) {
      const std::size_t s = static_cast<std::size_t>(start - hull.begin());
      r.convex = true;
      for (std::size_t i = 0; i < 4; ++i) {
        if (!(hull[(s + i) % 4] == v[i])) r.convex = false;
      }
    }
  }
  return r;
}

/// Per-side distances from `p` to the four side lines of a quadrilateral.
inline std::array<double, 4> side_distances(const std::array<Point2, 4>& v, Point2 p) {
  std::array<double, 4> d{};
  for (std::size_t i = 0; i < 4; ++i) {
    const LineEq side = LineEq::through(v[i], v[(i + 1) % 4] - v[i]);
    d[i] = std::abs(side.signed_distance(p));
  }
  return d;
}

/// Max deviation of a shape from its kind's defining equations.
inline double constraint_residual(const ShapeInstance& s) {
  const auto& v = s.vertices;
  const Point2 ab = v[1] - v[0], bc = v[2] - v[1], cd = v[3] - v[2], da = v[0] - v[3];
  const Point2 dc = v[2] - v[3], ad = v[3] - v[0];

  const auto parallelogram = [&] { return norm(ab - dc); };
  const auto right_angles = [&] {
    return std::max({std::abs(dot(ab, bc)), std::abs(dot(bc, cd)), std::abs(dot(cd, da)),
                     std::abs(dot(da, ab))});
  };
  const auto equal_sides = [&] {
    const double l[4] = {norm(ab), norm(bc), norm(cd), norm(da)};
    return *std::max_element(l, l + 4) - *std::min_element(l, l + 4);
  };

  switch (s.kind) {
    case ShapeKind::Parallelogram: return parallelogram();
    case ShapeKind::Rectangle: return std::max(parallelogram(), right_angles());
    case ShapeKind::Rhombus: return std::max(parallelogram(), equal_sides());
    case ShapeKind::Square:
      return std::max({parallelogram(), right_angles(), equal_sides()});
    case ShapeKind::Trapezoid: return std::abs(cross(ab, dc));
    case ShapeKind::IsoscelesTrapezoid:
      return std::max(std::abs(cross(ab, dc)), std::abs(norm(ad) - norm(bc)));
    case ShapeKind::TangentialQuad: {
      if (!s.incircle) return std::numeric_limits<double>::infinity();
      const auto d = side_distances(v, s.incircle->center);
      double worst = 0.0;
      for (double di : d) worst = std::max(worst, std::abs(di - s.incircle->radius));
      return worst;
    }
  }
  return std::numeric_limits<double>::infinity();
}

/// Full validation including the kind-specific constraint.
inline ValidationReport validate(const ShapeInstance& s, const WorldRect& bounds) {
  ValidationReport r = validate(s.vertices, bounds);
  r.constraint_residual = constraint_residual(s);
  r.residual_tolerance =
      s.kind == ShapeKind::TangentialQuad ? kTangencyTolerance : kEquationalTolerance;
  if (s.kind == ShapeKind::Trapezoid || s.kind == ShapeKind::IsoscelesTrapezoid) {
    const auto& v = s.vertices;
    r.parallel_exclusive = std::abs(cross(v[3] - v[0], v[2] - v[1])) > kParallelExclusivity;
  }
  if (s.incircle.has_value() != (s.kind == ShapeKind::TangentialQuad)) {
    r.constraint_residual = std::numeric_limits<double>::infinity();
  }
  return r;
}

/// Intersection of interior angle bisectors at A and B; throws NotTangential
/// when the point is not equidistant from all four sides.
inline Point2 incenter(const ShapeInstance& s) {
  const auto& v = s.vertices;
  const LineEq at_a = angle_bisector(v[3], v[0], v[1]);
  const LineEq at_b = angle_bisector(v[0], v[1], v[2]);
  const auto p = line_intersection(at_a, at_b);
  if (!p) throw NotTangential("incenter: bisectors at A and B are parallel");
  const auto d = side_distances(v, *p);
  const double spread = *std::max_element(d.begin(), d.end()) - *std::min_element(d.begin(), d.end());
  if (spread > kTangencyTolerance) {
    throw NotTangential("incenter: side distances disagree by " + std::to_string(spread));
  }
  return *p;
}

// -- sampling ----------------------------------------------------------------

struct SamplingRanges {
  double side_min = 3.0;
  double side_max = 10.0;
  /// Oblique angle range for parallelograms and rhombi, in degrees, with the
  /// near-right band removed.
  double angle_min_deg = 35.0;
  double angle_max_deg = 145.0;
  double right_band_lo_deg = 85.0;
  double right_band_hi_deg = 95.0;
  double trap_ratio_min = 0.5;
  double trap_ratio_max = 0.95;
  double trap_height_min = 3.0;
  double trap_height_max = 10.0;
  double trap_offset_min = -5.0;
  double trap_offset_max = 5.0;
  double incircle_radius_min = 1.5;
  double incircle_radius_max = 4.0;
  double tangent_min_gap_deg = 30.0;
  /// Shapes are centred on the origin and must fit in this square.
  WorldRect bounds{-12.0, -12.0, 12.0, 12.0};
};

inline ShapeKind sample_kind(RngStream& rng) {
  return kAllShapeKinds[static_cast<std::size_t>(rng.uniform_int(0, 6))];
}

namespace detail {

inline double sample_oblique_angle(RngStream& rng, const SamplingRanges& r) {
  const double lower = r.right_band_lo_deg - r.angle_min_deg;
  const double upper = r.angle_max_deg - r.right_band_hi_deg;
  const double u = rng.uniform(0.0, lower + upper);
  const double deg = u < lower ? r.angle_min_deg + u : r.right_band_hi_deg + (u - lower);
  return deg * std::numbers::pi / 180.0;
}

/// Parallelogram from |AB| = a, |AD| = b and interior angle at A.
inline std::array<Point2, 4> parallelogram_frame(double a, double b, double theta, bool right) {
  const Point2 d = right ? Point2{0.0, b} : Point2{b * std::cos(theta), b * std::sin(theta)};
  const Point2 bpt{a, 0.0};
  return {Point2{0.0, 0.0}, bpt, bpt + d, d};
}

/// Rotate a CCW vertex loop so it starts at the lowest (y, then x) vertex.
inline std::array<Point2, 4> normalize_start(const std::array<Point2, 4>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < 4; ++i) {
    if (v[i].y < v[best].y || (v[i].y == v[best].y && v[i].x < v[best].x)) best = i;
  }
  std::array<Point2, 4> out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = v[(best + i) % 4];
  return out;
}

/// Candidate in its construction frame; nullopt when construction itself
/// degenerates (parallel tangents).
inline std::optional<ShapeInstance> construct(ShapeKind kind, RngStream& rng,
                                              const SamplingRanges& r) {
  ShapeInstance s;
  s.kind = kind;
  switch (kind) {
    case ShapeKind::Parallelogram: {
      const double a = rng.uniform(r.side_min, r.side_max);
      const double b = rng.uniform(r.side_min, r.side_max);
      s.vertices = parallelogram_frame(a, b, sample_oblique_angle(rng, r), false);
      break;
    }
    case ShapeKind::Rectangle: {
      const double a = rng.uniform(r.side_min, r.side_max);
      const double b = rng.uniform(r.side_min, r.side_max);
      s.vertices = parallelogram_frame(a, b, 0.0, true);
      break;
    }
    case ShapeKind::Rhombus: {
      const double a = rng.uniform(r.side_min, r.side_max);
      s.vertices = parallelogram_frame(a, a, sample_oblique_angle(rng, r), false);
      break;
    }
    case ShapeKind::Square: {
      const double a = rng.uniform(r.side_min, r.side_max);
      s.vertices = parallelogram_frame(a, a, 0.0, true);
      break;
    }
    case ShapeKind::Trapezoid:
    case ShapeKind::IsoscelesTrapezoid: {
      TrapezoidParams p;
      p.base_len = rng.uniform(r.side_min, r.side_max);
      p.ratio = rng.uniform(r.trap_ratio_min, r.trap_ratio_max);
      p.height = rng.uniform(r.trap_height_min, r.trap_height_max);
      p.offset = rng.uniform(r.trap_offset_min, r.trap_offset_max);
      if (kind == ShapeKind::IsoscelesTrapezoid) {
        p.offset = (p.base_len - p.ratio * p.base_len) / 2.0;
      }
      const auto lit = make_trapezoid(p);
      // Construction order A, B, C, D is crossed; the simple CCW loop is
      // A, B, (d+kB, h), (d, h).
      s.vertices = {lit[0], lit[1], lit[3], lit[2]};
      break;
    }
    case ShapeKind::TangentialQuad: {
      const double radius = rng.uniform(r.incircle_radius_min, r.incircle_radius_max);
      const double min_gap = r.tangent_min_gap_deg * std::numbers::pi / 180.0;
      const double slack = 2.0 * std::numbers::pi - 4.0 * min_gap;
      // Uniform spacings on the simplex, each gap at least min_gap.
      std::array<double, 3> cuts{rng.uniform01(), rng.uniform01(), rng.uniform01()};
      std::sort(cuts.begin(), cuts.end());
      const std::array<double, 4> w{cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], 1.0 - cuts[2]};
      double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
      std::array<LineEq, 4> tangents;
      for (std::size_t i = 0; i < 4; ++i) {
        tangents[i] = LineEq::make(std::cos(phi), std::sin(phi), radius);
        phi += min_gap + slack * w[i];
      }
      for (std::size_t i = 0; i < 4; ++i) {
        const auto p = line_intersection(tangents[i], tangents[(i + 1) % 4]);
        if (!p) return std::nullopt;
        s.vertices[i] = *p;
      }
      s.incircle = Incircle{Point2{0.0, 0.0}, radius};
      break;
    }
  }
  s.vertices = normalize_start(s.vertices);
  return s;
}

/// Random rotation about the origin, then centre the bounding box on it.
inline void place(ShapeInstance& s, RngStream& rng) {
  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double c = std::cos(angle), sn = std::sin(angle);
  for (auto& p : s.vertices) p = rotate(p, c, sn);
  if (s.incircle) s.incircle->center = rotate(s.incircle->center, c, sn);
  WorldRect box = WorldRect::around(s.vertices[0]);
  for (const auto& p : s.vertices) box.include(p);
  const Point2 shift{-(box.min_x + box.max_x) / 2.0, -(box.min_y + box.max_y) / 2.0};
  for (auto& p : s.vertices) p = p + shift;
  if (s.incircle) s.incircle->center = s.incircle->center + shift;
}

}  // namespace detail

/// Draw a valid instance of `kind`. Each rejected draw is replaced by a full
/// resample; after kMaxSampleAttempts rejections GenerationExhausted is thrown.
inline ShapeInstance sample_shape(ShapeKind kind, RngStream& rng,
                                  const SamplingRanges& ranges = {}) {
  for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
    auto candidate = detail::construct(kind, rng, ranges);
    if (!candidate) continue;
    detail::place(*candidate, rng);
    if (validate(*candidate, ranges.bounds).accepted()) return *candidate;
  }
  throw GenerationExhausted("sample_shape: " + std::string(to_string(kind)) + " rejected " +
                            std::to_string(kMaxSampleAttempts) + " times");
}

}  // namespace geomforge
