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

#include <cmath>
#include <map>
#include <numbers>

#include "geomforge/geom_core.hpp"

namespace geomforge {
namespace {

double side(const ShapeInstance& s, int i) { return distance(s.vertices[i], s.vertices[(i + 1) % 4]); }

TEST(LineIntersection, AxesMeetAtOrigin) {
  const auto p = line_intersection(LineEq::make(0, 1, 0), LineEq::make(1, 0, 0));
  ASSERT_TRUE(p);
  EXPECT_EQ(p->x, 0.0);
  EXPECT_EQ(p->y, 0.0);
}

TEST(LineIntersection, ParallelLinesHaveNone) {
  EXPECT_FALSE(line_intersection(LineEq::make(0, 1, 0), LineEq::make(0, 1, 1)));
}

TEST(LineIntersection, HandSolvedSystem) {
  // x + y = 2 and x - y = 0 by elimination: 2x = 2.
  const auto p = line_intersection(LineEq::make(1, 1, 2), LineEq::make(1, -1, 0));
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->x, 1.0, 1e-12);
  EXPECT_NEAR(p->y, 1.0, 1e-12);
}

TEST(LineEq, NormalIsUnitAndZeroRejected) {
  const auto l = LineEq::make(3, 4, 10);
  EXPECT_NEAR(l.a * l.a + l.b * l.b, 1.0, 1e-15);
  EXPECT_NEAR(l.c, 2.0, 1e-15);
  EXPECT_THROW(LineEq::make(0, 0, 1), ParamOutOfRange);
}

TEST(AngleBisector, RightAngleIsDiagonal) {
  for (double arm : {1.0, 2.0}) {
    const auto l = angle_bisector({arm, 0}, {0, 0}, {0, arm});
    EXPECT_NEAR(std::abs(l.signed_distance({0, 0})), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(l.signed_distance({1, 1})), 0.0, 1e-12);
  }
}

TEST(AngleBisector, MatchesRotatingArmByHalfAngle) {
  const Point2 prev{1, 0}, vtx{0, 0}, next{-1, 1};
  const auto l = angle_bisector(prev, vtx, next);
  // Independent route: rotate the first arm by half the angle between arms.
  const double a0 = std::atan2(prev.y, prev.x), a1 = std::atan2(next.y, next.x);
  const double half = (a1 - a0) / 2.0;
  const Point2 dir{std::cos(a0 + half), std::sin(a0 + half)};
  EXPECT_NEAR(std::abs(cross(l.direction(), dir)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(l.signed_distance(vtx)), 0.0, 1e-15);
}

TEST(AngleBisector, CollinearThrows) {
  EXPECT_THROW(angle_bisector({1, 0}, {0, 0}, {-1, 0}), DegenerateAngle);
}

TEST(MakeTrapezoid, LiteralConstruction) {
  const auto v = make_trapezoid({8, 0.5, 4, 2});
  EXPECT_EQ(v[0], (Point2{0, 0}));
  EXPECT_EQ(v[1], (Point2{8, 0}));
  EXPECT_EQ(v[2], (Point2{2, 4}));
  EXPECT_EQ(v[3], (Point2{6, 4}));
}

TEST(MakeTrapezoid, RejectsOutOfRange) {
  EXPECT_THROW(make_trapezoid({1, 0.999, 1, 0}), ParamOutOfRange);
}

TEST(MakeTrapezoid, TopSideLength) {
  const auto v = make_trapezoid({10, 0.9, 3, -5});
  EXPECT_NEAR(distance(v[2], v[3]), 9.0, 1e-12);
}

ShapeInstance unit_square() {
  ShapeInstance s;
  s.kind = ShapeKind::Square;
  s.vertices = {Point2{0, 0}, Point2{1, 0}, Point2{1, 1}, Point2{0, 1}};
  return s;
}

TEST(Incenter, UnitSquare) {
  const auto c = incenter(unit_square());
  EXPECT_NEAR(c.x, 0.5, 1e-12);
  EXPECT_NEAR(c.y, 0.5, 1e-12);
  for (double d : side_distances(unit_square().vertices, c)) EXPECT_NEAR(d, 0.5, 1e-12);
}

TEST(Incenter, RhombusAtOrigin) {
  ShapeInstance s;
  s.kind = ShapeKind::Rhombus;
  s.vertices = {Point2{0, -2}, Point2{1, 0}, Point2{0, 2}, Point2{-1, 0}};
  const auto c = incenter(s);
  EXPECT_NEAR(c.x, 0.0, 1e-12);
  EXPECT_NEAR(c.y, 0.0, 1e-12);
}

TEST(Incenter, NonTangentialThrows) {
  ShapeInstance s;
  s.vertices = {Point2{0, 0}, Point2{4, 0}, Point2{4, 1}, Point2{0, 1}};
  EXPECT_THROW(incenter(s), NotTangential);
}

TEST(Validate, Examples) {
  const WorldRect big{-100, -100, 100, 100};
  EXPECT_TRUE(validate(unit_square().vertices, big).accepted());
  const auto collinear = validate({Point2{0, 0}, Point2{1, 0}, Point2{2, 0}, Point2{0, 1}}, big);
  EXPECT_FALSE(collinear.accepted());
  EXPECT_LE(collinear.min_triple_area, 1e-6);
  const auto dart = validate({Point2{0, 0}, Point2{4, 0}, Point2{1, 1}, Point2{0, 4}}, big);
  EXPECT_FALSE(dart.convex);
  EXPECT_EQ(detail::convex_hull(std::array<Point2, 4>{Point2{0, 0}, Point2{4, 0}, Point2{1, 1},
                                                      Point2{0, 4}})
                .size(),
            3u);
  // Clockwise order is rejected.
  EXPECT_FALSE(validate({Point2{0, 0}, Point2{0, 1}, Point2{1, 1}, Point2{1, 0}}, big).convex);
  EXPECT_FALSE(validate(unit_square().vertices, WorldRect{0, 0, 0.5, 0.5}).in_bounds);
}

class SampleShapeTest : public ::testing::TestWithParam<ShapeKind> {};

TEST_P(SampleShapeTest, AcceptedAndDefiningConstraintHolds) {
  const ShapeKind kind = GetParam();
  const SamplingRanges ranges;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    RngStream rng(seed);
    const auto s = sample_shape(kind, rng);
    ASSERT_EQ(s.kind, kind);
    const auto rep = validate(s, ranges.bounds);
    ASSERT_TRUE(rep.accepted()) << "seed " << seed;
    const auto& v = s.vertices;
    ASSERT_GT(cross(v[1] - v[0], v[2] - v[0]), 0.0);
    switch (kind) {
      case ShapeKind::Square:
        for (int i = 0; i < 4; ++i) {
          EXPECT_NEAR(side(s, i), side(s, 0), 1e-9);
          EXPECT_NEAR(dot(v[(i + 1) % 4] - v[i], v[(i + 2) % 4] - v[(i + 1) % 4]), 0.0, 1e-9);
        }
        break;
      case ShapeKind::Parallelogram: {
        const Point2 m1 = 0.5 * (v[0] + v[2]), m2 = 0.5 * (v[1] + v[3]);
        EXPECT_NEAR(distance(m1, m2), 0.0, 1e-9);
        break;
      }
      case ShapeKind::Trapezoid:
      case ShapeKind::IsoscelesTrapezoid:
        EXPECT_LT(std::abs(cross(v[1] - v[0], v[2] - v[3])), 1e-9);
        EXPECT_GT(std::abs(cross(v[3] - v[0], v[2] - v[1])), 1e-6);
        if (kind == ShapeKind::IsoscelesTrapezoid) {
          EXPECT_NEAR(side(s, 1), side(s, 3), 1e-9);
        }
        break;
      case ShapeKind::TangentialQuad: {
        ASSERT_TRUE(s.incircle);
        EXPECT_NEAR(side(s, 0) + side(s, 2), side(s, 1) + side(s, 3), 1e-6);
        const Point2 c = incenter(s);
        EXPECT_NEAR(distance(c, s.incircle->center), 0.0, 1e-6);
        // Bisectors at C and D meet at the same point.
        const auto other = line_intersection(angle_bisector(v[1], v[2], v[3]),
                                             angle_bisector(v[2], v[3], v[0]));
        ASSERT_TRUE(other);
        EXPECT_NEAR(distance(c, *other), 0.0, 1e-9);
        break;
      }
      case ShapeKind::Rectangle:
      case ShapeKind::Rhombus:
        EXPECT_LT(constraint_residual(s), 1e-9);
        break;
    }
  }
}

TEST_P(SampleShapeTest, Deterministic) {
  RngStream a(42), b(42);
  const auto s1 = sample_shape(GetParam(), a);
  const auto s2 = sample_shape(GetParam(), b);
  EXPECT_EQ(s1.vertices, s2.vertices);
}

INSTANTIATE_TEST_SUITE_P(AllKinds, SampleShapeTest, ::testing::ValuesIn(kAllShapeKinds),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(SampleShape, ImpossibleRangesExhaust) {
  SamplingRanges r;
  r.bounds = {-0.1, -0.1, 0.1, 0.1};
  RngStream rng(1);
  EXPECT_THROW(sample_shape(ShapeKind::Square, rng, r), GenerationExhausted);
}

TEST(SampleKind, UniformOverSevenKinds) {
  // Seven equally likely kinds: each near 1/7.
  RngStream rng(2024);
  std::map<ShapeKind, int> counts;
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[sample_kind(rng)];
  ASSERT_EQ(counts.size(), 7u);
  for (const auto& [k, c] : counts) EXPECT_NEAR(static_cast<double>(c) / n, 1.0 / 7.0, 0.01);
}

TEST(ShapeKindNames, RoundTrip) {
  for (ShapeKind k : kAllShapeKinds) EXPECT_EQ(parse_shape_kind(to_string(k)), k);
  EXPECT_FALSE(parse_shape_kind("triangle"));
}

}  // namespace
}  // namespace geomforge
