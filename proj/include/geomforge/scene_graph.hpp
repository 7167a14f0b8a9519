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

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geomforge/error.hpp"
#include "geomforge/geom_core.hpp"
#include "geomforge/rng.hpp"

namespace geomforge {

/// Stable element identifier, printed as `kind:labels` ("side:AB") or just
/// `kind` when the element carries no labels ("incircle").
struct ElementId {
  std::string kind;
  std::vector<std::string> labels;

  std::string str() const {
    std::string out = kind;
    if (!labels.empty()) {
      out += ':';
      for (const auto& l : labels) out += l;
    }
    return out;
  }

  friend bool operator==(const ElementId&, const ElementId&) = default;
};

/// A vertex label is one uppercase letter optionally followed by digits.
inline bool is_valid_label(std::string_view s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

inline ElementId parse_element_id(std::string_view text) {
  ElementId id;
  const auto colon = text.find(':');
  id.kind = std::string(text.substr(0, colon));
  if (id.kind.empty() ||
      !std::all_of(id.kind.begin(), id.kind.end(),
                   [](char c) { return std::islower(static_cast<unsigned char>(c)) || c == '_'; })) {
    throw InvalidElementId("bad element kind in '" + std::string(text) + "'");
  }
  if (colon == std::string_view::npos) return id;
  const std::string_view rest = text.substr(colon + 1);
  if (rest.empty()) throw InvalidElementId("empty label list in '" + std::string(text) + "'");
  std::size_t i = 0;
  while (i < rest.size()) {
    if (!std::isupper(static_cast<unsigned char>(rest[i]))) {
      throw InvalidElementId("bad label in '" + std::string(text) + "'");
    }
    std::size_t j = i + 1;
    while (j < rest.size() && std::isdigit(static_cast<unsigned char>(rest[j]))) ++j;
    id.labels.emplace_back(rest.substr(i, j - i));
    i = j;
  }
  return id;
}

// -- primitives ---------------------------------------------------------------

struct Segment {
  Point2 p1, p2;
};
struct Circle {
  Point2 center;
  double radius = 0.0;
};
struct Dot {
  Point2 p;
};
enum class Placement { Above, Below, Left, Right };
struct TextLabel {
  Point2 anchor;
  std::string text;
  Placement placement = Placement::Above;
};
struct PolygonOutline {
  std::array<Point2, 4> points;
};

using Primitive = std::variant<Segment, Circle, Dot, TextLabel, PolygonOutline>;

struct SceneElement {
  ElementId id;
  Primitive primitive;
};

// Label glyph metrics in world units (cm). Cap height of a 12 pt face.
inline constexpr double kLabelCapHeight = 0.30;
inline constexpr double kLabelGlyphWidth = 0.20;
inline constexpr double kLabelAdvance = 0.28;
inline constexpr double kLabelGap = 0.15;
inline constexpr double kLabelStroke = 0.03;
inline constexpr double kDotRadius = 0.06;
inline constexpr double kDefaultStrokeWidth = 0.04;
inline constexpr double kCanvasMargin = 0.5;
inline constexpr double kCmPerInch = 2.54;

/// Box occupied by the label's glyphs (excluding glyph stroke width).
inline WorldRect label_box(const TextLabel& t) {
  const double n = static_cast<double>(std::max<std::size_t>(t.text.size(), 1));
  const double w = (n - 1.0) * kLabelAdvance + kLabelGlyphWidth;
  const double h = kLabelCapHeight;
  Point2 c = t.anchor;
  switch (t.placement) {
    case Placement::Above: c.y += kLabelGap + h / 2; break;
    case Placement::Below: c.y -= kLabelGap + h / 2; break;
    case Placement::Right: c.x += kLabelGap + w / 2; break;
    case Placement::Left: c.x -= kLabelGap + w / 2; break;
  }
  return {c.x - w / 2, c.y - h / 2, c.x + w / 2, c.y + h / 2};
}

constexpr std::string_view to_string(Placement p) {
  switch (p) {
    case Placement::Above: return "above";
    case Placement::Below: return "below";
    case Placement::Left: return "left";
    case Placement::Right: return "right";
  }
  return "above";
}

enum class TargetKind { Side, Polygon, Incircle, Diagonal };

constexpr std::string_view to_string(TargetKind k) {
  switch (k) {
    case TargetKind::Side: return "side";
    case TargetKind::Polygon: return "polygon";
    case TargetKind::Incircle: return "incircle";
    case TargetKind::Diagonal: return "diagonal";
  }
  return "side";
}

inline std::optional<TargetKind> parse_target_kind(std::string_view s) {
  for (TargetKind k : {TargetKind::Side, TargetKind::Polygon, TargetKind::Incircle,
                       TargetKind::Diagonal}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

struct Target {
  ElementId element_id;
  TargetKind target_kind = TargetKind::Side;
};

struct Scene {
  std::vector<SceneElement> elements;
  WorldRect canvas;
  double stroke_width = kDefaultStrokeWidth;
  ShapeKind shape_kind = ShapeKind::Parallelogram;
  std::array<std::string, 4> labels{"A", "B", "C", "D"};

  const SceneElement* find(const ElementId& id) const {
    for (const auto& e : elements) {
      if (e.id == id) return &e;
    }
    return nullptr;
  }
};

struct SceneOptions {
  bool draw_diagonals = false;
  double stroke_width = kDefaultStrokeWidth;
};

/// Conservative world-space bounds of a primitive's ink.
inline WorldRect primitive_bounds(const Primitive& prim, double stroke_width) {
  const double hw = stroke_width / 2;
  return std::visit(
      [&](const auto& p) -> WorldRect {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Segment>) {
          WorldRect r = WorldRect::around(p.p1);
          r.include(p.p2);
          return r.expanded(hw);
        } else if constexpr (std::is_same_v<T, Circle>) {
          return WorldRect::around(p.center).expanded(p.radius + hw);
        } else if constexpr (std::is_same_v<T, Dot>) {
          return WorldRect::around(p.p).expanded(kDotRadius);
        } else if constexpr (std::is_same_v<T, TextLabel>) {
          return label_box(p).expanded(kLabelStroke / 2);
        } else {
          WorldRect r = WorldRect::around(p.points[0]);
          for (const auto& q : p.points) r.include(q);
          // Miter joins reach at most miter_limit * hw from a vertex.
          return r.expanded(4.0 * hw);
        }
      },
      prim);
}

/// Snap a rectangle outwards to whole inches, keeping it centred, so pixel
/// dimensions are exactly inches * dpi at every resolution.
inline WorldRect snap_to_inches(const WorldRect& r) {
  const double w = std::ceil(r.width() / kCmPerInch - 1e-9) * kCmPerInch;
  const double h = std::ceil(r.height() / kCmPerInch - 1e-9) * kCmPerInch;
  const double cx = (r.min_x + r.max_x) / 2, cy = (r.min_y + r.max_y) / 2;
  return {cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2};
}

namespace detail {

inline Placement outward_placement(Point2 vertex, Point2 centroid) {
  const Point2 d = vertex - centroid;
  if (std::abs(d.x) > std::abs(d.y)) return d.x > 0 ? Placement::Right : Placement::Left;
  return d.y >= 0 ? Placement::Above : Placement::Below;
}

}  // namespace detail

/// Drawable elements for a shape: sides, outline, incircle, optional
/// diagonals and the four vertex labels, in that drawing order.
inline Scene build_scene(const ShapeInstance& shape, const SceneOptions& options = {}) {
  for (const auto& l : shape.labels) {
    if (!is_valid_label(l)) throw InvalidElementId("invalid vertex label '" + l + "'");
  }
  Scene scene;
  scene.shape_kind = shape.kind;
  scene.labels = shape.labels;
  scene.stroke_width = options.stroke_width;

  const auto& v = shape.vertices;
  const auto& lb = shape.labels;
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t j = (i + 1) % 4;
    scene.elements.push_back({ElementId{"side", {lb[i], lb[j]}}, Segment{v[i], v[j]}});
  }
  scene.elements.push_back(
      {ElementId{"polygon", {lb[0], lb[1], lb[2], lb[3]}}, PolygonOutline{v}});
  if (shape.incircle) {
    scene.elements.push_back(
        {ElementId{"incircle", {}}, Circle{shape.incircle->center, shape.incircle->radius}});
  }
  if (options.draw_diagonals) {
    scene.elements.push_back({ElementId{"diagonal", {lb[0], lb[2]}}, Segment{v[0], v[2]}});
    scene.elements.push_back({ElementId{"diagonal", {lb[1], lb[3]}}, Segment{v[1], v[3]}});
  }
  const Point2 centroid = 0.25 * (v[0] + v[1] + v[2] + v[3]);
  for (std::size_t i = 0; i < 4; ++i) {
    scene.elements.push_back(
        {ElementId{"vertex", {lb[i]}},
         TextLabel{v[i], lb[i], detail::outward_placement(v[i], centroid)}});
  }

  WorldRect box = primitive_bounds(scene.elements[0].primitive, scene.stroke_width);
  for (const auto& e : scene.elements) {
    const WorldRect r = primitive_bounds(e.primitive, scene.stroke_width);
    box.include({r.min_x, r.min_y});
    box.include({r.max_x, r.max_y});
  }
  scene.canvas = snap_to_inches(box.expanded(kCanvasMargin));
  return scene;
}

inline std::optional<TargetKind> target_kind_of(const ElementId& id) {
  if (id.kind == "side") return TargetKind::Side;
  if (id.kind == "polygon") return TargetKind::Polygon;
  if (id.kind == "incircle") return TargetKind::Incircle;
  if (id.kind == "diagonal") return TargetKind::Diagonal;
  return std::nullopt;
}

/// Referable targets: sides in label order, the polygon, the incircle, then
/// diagonals (each only when present in the scene).
inline std::vector<Target> enumerate_targets(const Scene& scene) {
  std::vector<Target> out;
  for (TargetKind want : {TargetKind::Side, TargetKind::Polygon, TargetKind::Incircle,
                          TargetKind::Diagonal}) {
    for (const auto& e : scene.elements) {
      const auto k = target_kind_of(e.id);
      if (k && *k == want) out.push_back({e.id, *k});
    }
  }
  return out;
}

/// Checks the structural invariants of a scene (unique ids, finite geometry,
/// non-empty labels, at most one outline).
inline bool is_valid_scene(const Scene& scene) {
  std::set<std::string> ids;
  int outlines = 0;
  for (const auto& e : scene.elements) {
    if (!ids.insert(e.id.str()).second) return false;
    const bool ok = std::visit(
        [&](const auto& p) -> bool {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Segment>) return p.p1.finite() && p.p2.finite();
          else if constexpr (std::is_same_v<T, Circle>)
            return p.center.finite() && std::isfinite(p.radius) && p.radius > 0;
          else if constexpr (std::is_same_v<T, Dot>) return p.p.finite();
          else if constexpr (std::is_same_v<T, TextLabel>) return p.anchor.finite() && !p.text.empty();
          else {
            ++outlines;
            return std::all_of(p.points.begin(), p.points.end(), [](Point2 q) { return q.finite(); });
          }
        },
        e.primitive);
    if (!ok) return false;
  }
  return outlines <= 1;
}

/// Element dropout: every element that is not the target, not a label, and
/// not a side adjacent to a side target is removed with probability p_drop.
/// One Bernoulli draw is consumed per droppable element.
inline Scene drop_non_target(const Scene& scene, const Target& keep, double p_drop,
                             RngStream& rng) {
  if (!(p_drop >= 0.0 && p_drop <= 1.0)) {
    throw ParamOutOfRange("drop_non_target: p_drop must lie in [0, 1]");
  }
  if (scene.find(keep.element_id) == nullptr) {
    throw InvalidElementId("drop_non_target: target " + keep.element_id.str() + " not in scene");
  }
  const auto shares_vertex = [](const ElementId& a, const ElementId& b) {
    for (const auto& la : a.labels) {
      if (std::find(b.labels.begin(), b.labels.end(), la) != b.labels.end()) return true;
    }
    return false;
  };

  Scene out = scene;
  out.elements.clear();
  for (const auto& e : scene.elements) {
    const bool protected_elem =
        e.id == keep.element_id || std::holds_alternative<TextLabel>(e.primitive) ||
        (keep.target_kind == TargetKind::Side && e.id.kind == "side" &&
         shares_vertex(e.id, keep.element_id));
    if (protected_elem || !rng.bernoulli(p_drop)) out.elements.push_back(e);
  }
  return out;
}

}  // namespace geomforge
