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

#include "geomforge/mask_ops.hpp"
#include "geomforge/renderer.hpp"

namespace geomforge {
namespace {

ShapeInstance unit_square() {
  ShapeInstance s;
  s.kind = ShapeKind::Square;
  s.vertices = {Point2{0, 0}, Point2{1, 0}, Point2{1, 1}, Point2{0, 1}};
  return s;
}

RasterImage solid(Rgb c) { return RasterImage(32, 32, c); }

TEST(ChannelMask, UnitPixelTable) {
  EXPECT_EQ(channel_mask(solid({255, 0, 0})).count(), 32u * 32u);
  EXPECT_EQ(channel_mask(solid({0, 0, 0})).count(), 0u);
  EXPECT_EQ(channel_mask(solid({255, 255, 255})).count(), 0u);
  // 200 - 80/2 - 80/2 = 120 > 50.
  EXPECT_EQ(channel_mask(solid({200, 80, 80})).count(), 32u * 32u);
  // Exactly at the threshold is off: 150 - 50 - 50 = 50.
  EXPECT_EQ(channel_mask(solid({150, 100, 100})).count(), 0u);
}

TEST(ChannelMask, GreyscaleNeverMasked) {
  for (int v = 0; v < 256; v += 15) {
    const auto g = static_cast<std::uint8_t>(v);
    EXPECT_TRUE(channel_mask(solid({g, g, g}), 0.0).empty());
  }
}

TEST(Render, EmptySceneIsWhite) {
  Scene s;
  s.canvas = {0, 0, 2 * kCmPerInch, kCmPerInch};
  const RasterImage img = render_scene(s, {.dpi = 100});
  EXPECT_EQ(img.width(), 200);
  EXPECT_EQ(img.height(), 100);
  EXPECT_TRUE(ink_of(img).empty());
}

TEST(Render, DoublingDpiDoublesDimensions) {
  const Scene s = build_scene(unit_square());
  const auto a = pixel_frame(s, {.dpi = 100});
  const auto b = pixel_frame(s, {.dpi = 200});
  EXPECT_EQ(b.width, 2 * a.width);
  EXPECT_EQ(b.height, 2 * a.height);
}

// Ink measured in pixel units: each pixel contributes its coverage, so
// axis-aligned strokes do not snap to whole rows.
double ink_area(const RasterImage& img) {
  double n = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) n += (255 - img.at(x, y).r) / 255.0;
  }
  return n;
}

TEST(Render, InkAreaScalesWithDpiSquared) {
  const Scene s = build_scene(unit_square());
  const double ratio =
      ink_area(render_scene(s, {.dpi = 200})) / ink_area(render_scene(s, {.dpi = 100}));
  EXPECT_GE(ratio, 3.6);
  EXPECT_LE(ratio, 4.4);
}

TEST(Render, Deterministic) {
  RngStream rng(3);
  const Scene s = build_scene(sample_shape(ShapeKind::TangentialQuad, rng));
  EXPECT_EQ(render_scene(s, {.dpi = 120}), render_scene(s, {.dpi = 120}));
}

TEST(Render, CanvasOverflow) {
  const Scene s = build_scene(unit_square());
  EXPECT_THROW(render_scene(s, {.dpi = 600, .max_dim = 100}), CanvasOverflow);
  EXPECT_THROW(render_scene(s, {.dpi = 20}), ParamOutOfRange);
}

TEST(RenderMask, DualPassSupportIdenticalAndAligned) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    RngStream rng(seed);
    const auto kind = sample_kind(rng);
    const Scene s = build_scene(sample_shape(kind, rng), {.draw_diagonals = seed % 2 == 0});
    const SceneRasterizer r(s, {.dpi = seed % 3 == 0 ? 72 : 250});
    const BinaryMask ink = ink_of(r.image());
    const BinaryMask near_ink = dilate(ink, 1.0);
    for (const auto& t : enumerate_targets(s)) {
      const RasterImage hl = r.highlight_image(t.element_id);
      EXPECT_EQ(ink_of(hl), ink) << t.element_id.str();
      const BinaryMask m = r.mask(t.element_id);
      EXPECT_FALSE(m.empty()) << t.element_id.str();
      EXPECT_TRUE(m.subset_of(near_ink)) << t.element_id.str();
      EXPECT_EQ(m, render_mask(s, t, {.dpi = seed % 3 == 0 ? 72 : 250}));
    }
  }
}

TEST(RenderMask, AllBlackSceneMasksToZero) {
  const Scene s = build_scene(unit_square());
  const RasterImage img = render_scene(s, {.dpi = 150});
  EXPECT_TRUE(channel_mask(img, 0.0).empty());
}

TEST(RenderMask, UnknownTargetThrows) {
  const Scene s = build_scene(unit_square());
  EXPECT_THROW(render_mask(s, {ElementId{"incircle", {}}, TargetKind::Incircle}, {.dpi = 72}),
               InvalidElementId);
}

TEST(RenderMask, SideStrokeIsThin) {
  // A 0.04 cm stroke at 250 dpi is about 4 px wide: the horizontal side's
  // mask should be a few rows tall.
  const Scene s = build_scene(unit_square());
  const BinaryMask m = SceneRasterizer(s, {.dpi = 250}).mask(parse_element_id("side:AB"));
  int rows = 0;
  for (int y = 0; y < m.height(); ++y) {
    bool any = false;
    for (int x = 0; x < m.width(); ++x) any = any || m.at(x, y);
    rows += any ? 1 : 0;
  }
  EXPECT_GE(rows, 3);
  EXPECT_LE(rows, 6);
}

TEST(Tikz, CoordinatesAndStructure) {
  const Scene s = build_scene(unit_square());
  const std::string tex = emit_tikz(s);
  EXPECT_NE(tex.find("\\coordinate (A) at (0.0000, 0.0000);"), std::string::npos);
  EXPECT_NE(tex.find("\\coordinate (C) at (1.0000, 1.0000);"), std::string::npos);
  EXPECT_NE(tex.find("\\draw[thick, black] (A) -- (B) -- (C) -- (D) -- cycle;"), std::string::npos);
  EXPECT_NE(tex.find("\\node[below] at (A) {A};"), std::string::npos);
  EXPECT_NE(tex.find("\\documentclass{standalone}"), std::string::npos);
  std::size_t count = 0;
  for (std::size_t p = tex.find("\\begin{tikzpicture}"); p != std::string::npos;
       p = tex.find("\\begin{tikzpicture}", p + 1)) {
    ++count;
  }
  EXPECT_EQ(count, 1u);
  EXPECT_EQ(tex, emit_tikz(s));
}

TEST(Tikz, CircleAndHighlight) {
  RngStream rng(4);
  const Scene s = build_scene(sample_shape(ShapeKind::TangentialQuad, rng));
  const std::string tex = emit_tikz(s, ElementId{"incircle", {}});
  EXPECT_NE(tex.find("circle ("), std::string::npos);
  const auto red = tex.find("[thick, red]");
  ASSERT_NE(red, std::string::npos);
  EXPECT_GT(red, tex.find("cycle;"));
}

}  // namespace
}  // namespace geomforge
