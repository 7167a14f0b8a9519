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

#include <cctype>
#include <map>
#include <set>

#include "geomforge/lang_gen.hpp"

namespace geomforge {
namespace {

Scene square_scene() {
  ShapeInstance s;
  s.kind = ShapeKind::Square;
  s.vertices = {Point2{0, 0}, Point2{4, 0}, Point2{4, 4}, Point2{0, 4}};
  return build_scene(s);
}

Scene tangential_scene(bool diagonals = true) {
  RngStream rng(11);
  return build_scene(sample_shape(ShapeKind::TangentialQuad, rng), {.draw_diagonals = diagonals});
}

const Target kSideAB{ElementId{"side", {"A", "B"}}, TargetKind::Side};

TEST(Templates, FirstTemplatesAreTheReferenceForms) {
  const Scene s = square_scene();
  const auto& store = TemplateStore::builtin();
  const std::vector<std::string> expect = {"line AB", "the line segment from point A to point B",
                                           "a straight line connecting points A and B"};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& fam = store.family(TargetKind::Side, kAllLevels[i]);
    ASSERT_FALSE(fam.empty());
    EXPECT_EQ(fill_template(fam[0], {"A", "B"}, shape_noun(s.shape_kind)), expect[i]);
  }
}

TEST(Templates, EveryFamilyHasAtLeastThree) {
  const auto& store = TemplateStore::builtin();
  for (TargetKind k : {TargetKind::Side, TargetKind::Polygon, TargetKind::Incircle,
                       TargetKind::Diagonal}) {
    for (ComplexityLevel l : kAllLevels) EXPECT_GE(store.family(k, l).size(), 3u);
  }
}

TEST(Templates, ParseErrors) {
  EXPECT_THROW(TemplateStore::parse("side\tdirect"), ConfigError);
  EXPECT_THROW(TemplateStore::parse("edge\tdirect\tline {A}{B}"), ConfigError);
  EXPECT_THROW(TemplateStore::parse("side\tsimple\tline {A}{B}"), ConfigError);
  const auto store = TemplateStore::parse("# comment\n\nside\tdirect\tline {A}{B}\r\n");
  EXPECT_EQ(store.family(TargetKind::Side, ComplexityLevel::Direct).size(), 1u);
  EXPECT_THROW(fill_template("{E}", {"A"}, "x"), ConfigError);
  EXPECT_THROW(fill_template("{C}", {"A", "B"}, "x"), ConfigError);
}

TEST(Describe, EmptyFamilyIsNoTemplate) {
  const auto store = TemplateStore::parse("side\tdirect\tline {A}{B}\n");
  RngStream rng(1);
  EXPECT_THROW(describe(kSideAB, square_scene(), ComplexityLevel::Topological, rng, store),
               NoTemplate);
  EXPECT_EQ(describe(kSideAB, square_scene(), ComplexityLevel::Direct, rng, store).text, "line AB");
}

TEST(Describe, TargetMustBeInScene) {
  RngStream rng(1);
  EXPECT_THROW(describe({ElementId{"incircle", {}}, TargetKind::Incircle}, square_scene(),
                        ComplexityLevel::Direct, rng),
               InvalidElementId);
}

TEST(DescribeAll, ThreeDistinctLevels) {
  RngStream rng(3);
  const auto all = describe_all(kSideAB, square_scene(), rng);
  ASSERT_EQ(all.size(), 3u);
  std::set<ComplexityLevel> levels;
  for (const auto& e : all) levels.insert(e.level);
  EXPECT_EQ(levels.size(), 3u);
}

TEST(DescribeAll, IncircleMentionsCircle) {
  const Scene s = tangential_scene();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream rng(seed);
    for (const auto& e : describe_all({ElementId{"incircle", {}}, TargetKind::Incircle}, s, rng)) {
      EXPECT_NE(e.text.find("circle"), std::string::npos) << e.text;
    }
  }
}

TEST(DescribeAll, DeterministicForSeed) {
  const Scene s = tangential_scene();
  for (const auto& t : enumerate_targets(s)) {
    RngStream a(99), b(99);
    const auto x = describe_all(t, s, a), y = describe_all(t, s, b);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(x[i].text, y[i].text);
  }
}

std::size_t count_word_with_label(const std::string& text, const std::string& label) {
  // Labels appear as standalone words or concatenated runs such as "ABCD".
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text.compare(i, label.size(), label) != 0) continue;
    const bool upper_before = i > 0 && std::isupper(static_cast<unsigned char>(text[i - 1])) == 0 &&
                              std::isalpha(static_cast<unsigned char>(text[i - 1]));
    if (upper_before) continue;
    ++n;
  }
  return n;
}

TEST(Describe, LabelsAndLengthBands) {
  // Every template of every family mentions all target labels; Direct
  // mentions each exactly once and stays within 2-3 words.
  const Scene s = tangential_scene();
  const auto& store = TemplateStore::builtin();
  for (const auto& t : enumerate_targets(s)) {
    std::vector<std::string> labels = t.element_id.labels;
    for (ComplexityLevel l : kAllLevels) {
      for (const auto& tmpl : store.family(t.target_kind, l)) {
        const std::string text = fill_template(
            tmpl, labels.empty() ? std::vector<std::string>(s.labels.begin(), s.labels.end()) : labels,
            shape_noun(s.shape_kind));
        for (const auto& lab : labels) {
          const std::size_t n = count_word_with_label(text, lab);
          EXPECT_GE(n, 1u) << text;
          if (l == ComplexityLevel::Direct) {
            EXPECT_EQ(n, 1u) << text;
          }
        }
        if (l == ComplexityLevel::Direct) {
          EXPECT_GE(word_count(text), 2u) << text;
          EXPECT_LE(word_count(text), 3u) << text;
        } else {
          EXPECT_GE(word_count(text), 4u) << text;
        }
      }
    }
  }
}

TEST(Describe, SamplingIsUniformOverFamily) {
  const Scene s = square_scene();
  const auto& fam = TemplateStore::builtin().family(TargetKind::Side, ComplexityLevel::Descriptive);
  std::map<std::string, int> counts;
  RngStream rng(5);
  const int n = 8000;
  for (int i = 0; i < n; ++i) ++counts[describe(kSideAB, s, ComplexityLevel::Descriptive, rng).text];
  ASSERT_EQ(counts.size(), fam.size());
  for (const auto& [text, c] : counts) {
    EXPECT_NEAR(static_cast<double>(c) / n, 1.0 / fam.size(), 0.02) << text;
  }
}

TEST(Describe, PolygonDirectUsesShapeNoun) {
  RngStream shape_rng(2);
  const Scene s = build_scene(sample_shape(ShapeKind::Trapezoid, shape_rng));
  const auto store = TemplateStore::parse("polygon\tdirect\t{shape} {A}{B}{C}{D}\n");
  RngStream rng(1);
  EXPECT_EQ(describe({ElementId{"polygon", {"A", "B", "C", "D"}}, TargetKind::Polygon}, s,
                     ComplexityLevel::Direct, rng, store)
                .text,
            "trapezoid ABCD");
}

TEST(LengthBand, Buckets) {
  EXPECT_EQ(length_band(word_count("line AB")), "short");
  EXPECT_EQ(length_band(word_count("the side joining A and B")), "medium");
  EXPECT_EQ(length_band(word_count("a straight line connecting points A and B")), "long");
}

}  // namespace
}  // namespace geomforge
