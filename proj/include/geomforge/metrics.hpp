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


// Overlap metrics. Buffered IoU expands both regions by a disk of radius
// beta before taking IoU; the pixel route (dilation) is normative and the
// polygon route buffers the continuous boundary as a cross-check.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "geomforge/error.hpp"
#include "geomforge/mask_ops.hpp"
#include "geomforge/poly_codec.hpp"
#include "geomforge/raster.hpp"

namespace geomforge {

inline constexpr double kDefaultBeta = 3.0;

/// |a & b| / |a | b|; 1 when both are empty.
inline double iou(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) {
    throw DimensionMismatch("iou: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                            " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += a[i] & b[i];
    uni += a[i] | b[i];
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

inline double biou_pixel(const BinaryMask& a, const BinaryMask& b, double beta = kDefaultBeta) {
  if (!a.same_shape(b)) return iou(a, b);
  return iou(dilate(a, beta), dilate(b, beta));
}

namespace detail {

inline bool segments_cross_properly(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

/// Pixel centres within `beta` of segment ab.
inline void mark_near_segment(BinaryMask& m, Point2 a, Point2 b, double beta) {
  const int x0 = std::max(0, static_cast<int>(std::ceil(std::min(a.x, b.x) - beta)));
  const int x1 = std::min(m.width() - 1, static_cast<int>(std::floor(std::max(a.x, b.x) + beta)));
  const int y0 = std::max(0, static_cast<int>(std::ceil(std::min(a.y, b.y) - beta)));
  const int y1 = std::min(m.height() - 1, static_cast<int>(std::floor(std::max(a.y, b.y) + beta)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (!m.at(x, y) && point_segment_distance({double(x), double(y)}, a, b) <= beta) m.set(x, y);
    }
  }
}

}  // namespace detail

/// Throws InvalidPolygon when two non-adjacent edges of one polygon cross.
inline void check_simple(const std::vector<Point2>& pts) {
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (detail::segments_cross_properly(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])) {
        throw InvalidPolygon("polygon edges " + std::to_string(i) + " and " + std::to_string(j) +
                             " cross");
      }
    }
  }
}

/// Region of the decoded polygons grown by a disk of radius `beta`,
/// sampled at pixel centres.
inline BinaryMask buffer_polygons(const std::vector<QuantizedPolygon>& polys, double beta,
                                  int width_px, int height_px) {
  if (!(beta >= 0.0)) throw ParamOutOfRange("buffer_polygons: beta must be >= 0");
  BinaryMask m = rasterize_polygons(polys, width_px, height_px);
  if (beta == 0.0) return m;
  for (const auto& q : polys) {
    const auto pts = dequantize(q, width_px, height_px).points;
    for (std::size_t i = 0, n = pts.size(); i < n; ++i) {
      detail::mark_near_segment(m, pts[i], pts[(i + 1) % n], beta);
    }
  }
  return m;
}

inline double biou_polygon(const std::vector<QuantizedPolygon>& pa,
                           const std::vector<QuantizedPolygon>& pb, double beta, int width_px,
                           int height_px) {
  for (const auto* list : {&pa, &pb}) {
    for (const auto& q : *list) check_simple(dequantize(q, width_px, height_px).points);
  }
  return iou(buffer_polygons(pa, beta, width_px, height_px),
             buffer_polygons(pb, beta, width_px, height_px));
}

}  // namespace geomforge
