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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "geomforge/metrics.hpp"
#include "geomforge/poly_codec.hpp"

namespace geomforge {
namespace {

BinaryMask rect(int w, int h, int x0, int y0, int x1, int y1) {
  BinaryMask m(w, h);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) m.set(x, y);
  }
  return m;
}

BinaryMask disk(int w, int h, double cx, double cy, double r) {
  BinaryMask m(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) m.set(x, y, (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r);
  }
  return m;
}

BinaryMask fill_contours(const std::vector<Contour>& cs, int w, int h) {
  BinaryMask m(w, h);
  std::vector<std::vector<Point2>> loops;
  for (const auto& c : cs) loops.push_back(c.points);
  fill_loops_even_odd(m, loops);
  return m;
}

TEST(Contours, EmptyMask) { EXPECT_TRUE(extract_contours(BinaryMask(8, 8)).empty()); }

TEST(Contours, SquareAreaMatchesPixelCount) {
  const auto m = rect(32, 32, 5, 5, 14, 14);
  const auto cs = extract_contours(m);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_FALSE(cs[0].hole);
  // Four axis-aligned sides joined by four half-pixel corner cuts.
  ASSERT_EQ(cs[0].points.size(), 8u);
  int axis_aligned = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    const Point2 a = cs[0].points[i], b = cs[0].points[(i + 1) % 8];
    if (a.x == b.x || a.y == b.y) ++axis_aligned;
  }
  EXPECT_EQ(axis_aligned, 4);
  EXPECT_NEAR(std::abs(signed_area(cs[0].points)), static_cast<double>(m.count()), 10.0);
  // Each of the four convex corners loses a 1/8 px triangle.
  EXPECT_DOUBLE_EQ(signed_area(cs[0].points), 100.0 - 4 * 0.125);
  EXPECT_EQ(fill_contours(cs, 32, 32), m);
}

TEST(Contours, TwoBlobsAndAHole) {
  BinaryMask m = rect(40, 20, 2, 2, 10, 10);
  const auto other = rect(40, 20, 20, 3, 35, 15);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] |= other[i];
  EXPECT_EQ(extract_contours(m).size(), 2u);
  m.set(27, 8, false);
  const auto cs = extract_contours(m);
  ASSERT_EQ(cs.size(), 3u);
  EXPECT_EQ(std::count_if(cs.begin(), cs.end(), [](const Contour& c) { return c.hole; }), 1);
  EXPECT_EQ(fill_contours(cs, 40, 20), m);
}

TEST(Contours, DiagonalPixelsJoinOneComponent) {
  BinaryMask m(8, 8);
  m.set(2, 2);
  m.set(3, 3);
  m.set(4, 4);
  const auto cs = extract_contours(m);
  ASSERT_EQ(cs.size(), 1u);
  // Pixel area less 1/8 px per net convex turn; a closed loop turns four times.
  EXPECT_NEAR(signed_area(cs[0].points), 3.0 - 0.5, 1e-12);
  EXPECT_EQ(fill_contours(cs, 8, 8), m);
}

TEST(Contours, RandomMasksReconstructExactly) {
  RngStream rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    BinaryMask m(30, 25);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = rng.bernoulli(0.45) ? 1 : 0;
    const auto cs = extract_contours(m);
    EXPECT_EQ(fill_contours(cs, 30, 25), m) << "trial " << trial;
  }
}

TEST(Contours, BlobsReconstructAfterSimplify) {
  RngStream rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = disk(64, 64, rng.uniform(20, 44), rng.uniform(20, 44), rng.uniform(6, 18));
    std::vector<Contour> cs;
    for (const auto& c : extract_contours(m)) cs.push_back(simplify(c, 1.0));
    EXPECT_GE(iou(fill_contours(cs, 64, 64), m), 0.85);
  }
}

TEST(Simplify, CollinearPointRemovedAtZero) {
  const Contour c{{Point2{0, 0}, Point2{1, 0}, Point2{2, 0}, Point2{2, 2}, Point2{0, 2}}, false};
  const auto s = simplify(c, 0.0);
  EXPECT_EQ(s.points.size(), 4u);
  EXPECT_EQ(std::find(s.points.begin(), s.points.end(), Point2{1, 0}), s.points.end());
}

double max_deviation(const Contour& original, const Contour& simplified) {
  double worst = 0.0;
  for (const auto& p : original.points) {
    double best = 1e300;
    const auto& q = simplified.points;
    for (std::size_t i = 0; i < q.size(); ++i) {
      best = std::min(best, detail::point_segment_distance(p, q[i], q[(i + 1) % q.size()]));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

TEST(Simplify, DigitalStripCollapsesToFewVertices) {
  // Pixels within 2.5 px of a line at every slope in the first octant; a
  // straight digital edge must not survive as a staircase at eps = 1.
  for (double slope : {0.0, 0.13, 0.37, 0.5, 0.71, 1.0}) {
    BinaryMask m(200, 200);
    const double norm = std::sqrt(1.0 + slope * slope);
    for (int y = 0; y < 200; ++y) {
      for (int x = 20; x < 180; ++x) {
        if (std::abs(y - (60.3 + slope * x)) / norm <= 2.5) m.set(x, y);
      }
    }
    const auto cs = extract_contours(m);
    ASSERT_EQ(cs.size(), 1u) << slope;
    EXPECT_LE(simplify(cs[0], 1.0).points.size(), 10u) << "slope " << slope;
  }
}

TEST(Simplify, DigitizedCircle) {
  const auto cs = extract_contours(disk(64, 64, 32, 32, 20));
  ASSERT_EQ(cs.size(), 1u);
  const auto s = simplify(cs[0], 2.0);
  EXPECT_LE(s.points.size(), 20u);
  EXPECT_LE(max_deviation(cs[0], s), 2.0);
  EXPECT_LE(s.points.size(), cs[0].points.size());
}

TEST(Simplify, HugeEpsilonDegenerates) {
  const auto cs = extract_contours(disk(64, 64, 32, 32, 20));
  EXPECT_THROW(simplify(cs[0], 1e6), DegenerateResult);
  EXPECT_THROW(simplify(cs[0], -1.0), ParamOutOfRange);
}

TEST(Quantize, CornersAndRounding) {
  const Contour c{{Point2{0, 0}, Point2{510, 0}, Point2{255, 99}}, false};
  const auto q = quantize(c, 511, 100);
  EXPECT_EQ(q.vertices[0], (std::array<int, 2>{0, 0}));
  EXPECT_EQ(q.vertices[1][0], 255);
  EXPECT_EQ(q.vertices[2][1], 255);
  // 255 * 255 / 510 = 127.5 rounds half up.
  EXPECT_EQ(q.vertices[2][0], 128);
  EXPECT_EQ(quantize_coord(-3.0, 100), 0);
  EXPECT_EQ(quantize_coord(1e9, 100), 255);
}

TEST(Quantize, RoundTripErrorBound) {
  RngStream rng(10);
  for (int trial = 0; trial < 1000; ++trial) {
    const int w = static_cast<int>(rng.uniform_int(2, 3000));
    const double x = rng.uniform(0, w - 1);
    const double back = dequantize_coord(quantize_coord(x, w), w);
    EXPECT_LE(std::abs(back - x), 0.5 * (w - 1) / 255.0 + 1e-9);
  }
}

TEST(Tokens, TriangleFormat) {
  const QuantizedPolygon tri{{{0, 0}, {255, 0}, {128, 255}}};
  EXPECT_EQ(encode_tokens({tri}), "<seg> 0,0, 255,0, 128,255 </seg>");
  EXPECT_EQ(polygon_token_count({tri}), 8u);
}

MalformedReason reason_of(const std::string& text) {
  try {
    decode_tokens(text);
  } catch (const MalformedSequence& e) {
    return e.reason();
  }
  ADD_FAILURE() << "no error for: " << text;
  return MalformedReason::UnbalancedDelimiters;
}

TEST(Tokens, DistinctErrors) {
  EXPECT_EQ(reason_of("<seg> 1,2, 3 </seg>"), MalformedReason::OddCoordinateCount);
  EXPECT_EQ(reason_of("<seg> 1,2, 3,4, 5,6"), MalformedReason::UnbalancedDelimiters);
  EXPECT_EQ(reason_of("1,2 </seg>"), MalformedReason::UnbalancedDelimiters);
  EXPECT_EQ(reason_of("<seg> 1,2, <seg> 3,4 </seg>"), MalformedReason::UnbalancedDelimiters);
  EXPECT_EQ(reason_of("<seg> 1,2, 3,256, 5,6 </seg>"), MalformedReason::OutOfRange);
  EXPECT_EQ(reason_of("<seg> 1,2, 3,-1, 5,6 </seg>"), MalformedReason::OutOfRange);
  EXPECT_EQ(reason_of("<seg> 1,2, 3,4.5, 5,6 </seg>"), MalformedReason::NonInteger);
  EXPECT_EQ(reason_of("<seg> 1,2, x,4, 5,6 </seg>"), MalformedReason::NonInteger);
  EXPECT_EQ(reason_of("<seg> 1,2, 3,4 </seg>"), MalformedReason::TooFewVertices);
}

TEST(Tokens, WhitespaceTolerant) {
  const auto polys = decode_tokens("  <seg>1,2,3,4,\n5,6</seg><seg>  7 , 8 ,9,10, 11,12 </seg>\t");
  ASSERT_EQ(polys.size(), 2u);
  EXPECT_EQ(polys[1].vertices[2], (std::array<int, 2>{11, 12}));
  EXPECT_TRUE(decode_tokens("").empty());
}

std::vector<QuantizedPolygon> random_polys(RngStream& rng) {
  std::vector<QuantizedPolygon> out(static_cast<std::size_t>(rng.uniform_int(1, 4)));
  for (auto& p : out) {
    const auto n = rng.uniform_int(3, 30);
    for (std::int64_t i = 0; i < n; ++i) {
      p.vertices.push_back({static_cast<int>(rng.uniform_int(0, 255)),
                            static_cast<int>(rng.uniform_int(0, 255))});
    }
  }
  return out;
}

TEST(Tokens, RoundTripRandomPolygons) {
  RngStream rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto polys = random_polys(rng);
    EXPECT_EQ(decode_tokens(encode_tokens(polys)), polys);
  }
}

TEST(Tokens, FuzzedDecodeNeverCrashes) {
  RngStream rng(12);
  const std::string alphabet = "<>/seg0123456789,, -.x\n";
  int errors = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::string text = encode_tokens(random_polys(rng));
    const auto edits = rng.uniform_int(1, 4);
    for (std::int64_t e = 0; e < edits && !text.empty(); ++e) {
      const auto pos = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(text.size()) - 1));
      switch (rng.uniform_int(0, 2)) {
        case 0: text.erase(pos, 1); break;
        case 1: text.insert(pos, 1, alphabet[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(alphabet.size()) - 1))]); break;
        default: text[pos] = alphabet[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(alphabet.size()) - 1))];
      }
    }
    try {
      const auto polys = decode_tokens(text);
      for (const auto& p : polys) {
        EXPECT_GE(p.vertices.size(), 3u);
        for (const auto& v : p.vertices) {
          EXPECT_TRUE(v[0] >= 0 && v[0] <= 255 && v[1] >= 0 && v[1] <= 255);
        }
      }
    } catch (const MalformedSequence&) {
      ++errors;
    }
  }
  EXPECT_GT(errors, 0);
}

TEST(Rasterize, FullFrameAndEmpty) {
  const QuantizedPolygon full{{{0, 0}, {255, 0}, {255, 255}, {0, 255}}};
  EXPECT_EQ(rasterize_polygons({full}, 37, 23).count(), 37u * 23u);
  EXPECT_TRUE(rasterize_polygons({}, 37, 23).empty());
}

TEST(Rasterize, ConvexAreaNearShoelace) {
  RngStream rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    // Random convex polygon: points on an ellipse at sorted angles.
    const double cx = rng.uniform(90, 166), cy = rng.uniform(90, 166);
    const double ax = rng.uniform(40, 80), ay = rng.uniform(40, 80);
    std::vector<double> ang;
    for (int i = 0; i < 8; ++i) ang.push_back(rng.uniform(0, 2 * std::numbers::pi));
    std::sort(ang.begin(), ang.end());
    QuantizedPolygon q;
    for (double a : ang) {
      q.vertices.push_back({static_cast<int>(std::lround(cx + ax * std::cos(a))),
                            static_cast<int>(std::lround(cy + ay * std::sin(a)))});
    }
    const int W = 256, H = 256;  // identity scale
    const double area = std::abs(signed_area(dequantize(q, W, H).points));
    if (area < 2000) continue;
    const double filled = static_cast<double>(rasterize_polygons({q}, W, H).count());
    EXPECT_NEAR(filled / area, 1.0, 0.03) << "trial " << trial;
  }
}

TEST(Rasterize, DegenerateDrawsStroke) {
  const QuantizedPolygon seg{{{0, 10}, {255, 10}, {0, 10}}};
  const auto m = rasterize_polygons({seg}, 256, 256);
  EXPECT_EQ(m.count(), 256u);
}

TEST(Rasterize, HoleSurvivesRoundTrip) {
  BinaryMask ring = disk(128, 128, 64, 64, 40);
  const auto inner = disk(128, 128, 64, 64, 25);
  for (std::size_t i = 0; i < ring.size(); ++i) ring[i] &= !inner[i];
  const auto back = tokens_to_mask(mask_to_tokens(ring), 128, 128);
  EXPECT_FALSE(back.at(64, 64));
  EXPECT_GE(iou(back, ring), 0.85);
}

TEST(Rle, Examples) {
  EXPECT_EQ(rle_encode(BinaryMask(4, 4)).runs, (std::vector<std::uint32_t>{16}));
  EXPECT_EQ(rle_encode(BinaryMask(4, 4, 1)).runs, (std::vector<std::uint32_t>{0, 16}));
  BinaryMask row(4, 1);
  row.set(1, 0);
  row.set(2, 0);
  EXPECT_EQ(rle_encode(row).runs, (std::vector<std::uint32_t>{1, 2, 1}));
}

TEST(Rle, RoundTrip) {
  RngStream rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    BinaryMask m(17, 9);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = rng.bernoulli(0.3) ? 1 : 0;
    const auto r = rle_encode(m);
    std::uint64_t sum = 0;
    for (auto v : r.runs) sum += v;
    EXPECT_EQ(sum, m.size());
    EXPECT_EQ(rle_decode(r), m);
  }
}

}  // namespace
}  // namespace geomforge
