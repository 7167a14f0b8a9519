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

// Single-stroke glyphs for A-Z and 0-9 on a 4 x 6 grid (y up).

#pragma once

#include <array>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "geomforge/geom_core.hpp"

namespace geomforge {

inline constexpr double kGlyphGridWidth = 4.0;
inline constexpr double kGlyphGridHeight = 6.0;

using GlyphStrokes = std::vector<std::vector<Point2>>;

namespace detail {

// Polylines separated by ';', points by whitespace.
inline constexpr std::array<std::string_view, 36> kGlyphSource = {
    "0,0 2,6 4,0; 1,2 3,2",                                            // A
    "0,0 0,6 3,6 4,5 4,4 3,3 0,3; 3,3 4,2 4,1 3,0 0,0",                // B
    "4,5 3,6 1,6 0,5 0,1 1,0 3,0 4,1",                                 // C
    "0,0 0,6 2,6 4,4 4,2 2,0 0,0",                                     // D
    "4,6 0,6 0,0 4,0; 0,3 3,3",                                        // E
    "4,6 0,6 0,0; 0,3 3,3",                                            // F
    "4,5 3,6 1,6 0,5 0,1 1,0 3,0 4,1 4,3 2,3",                         // G
    "0,0 0,6; 4,0 4,6; 0,3 4,3",                                       // H
    "1,6 3,6; 2,6 2,0; 1,0 3,0",                                       // I
    "4,6 4,1 3,0 1,0 0,1",                                             // J
    "0,0 0,6; 4,6 0,2; 1,3 4,0",                                       // K
    "0,6 0,0 4,0",                                                     // L
    "0,0 0,6 2,3 4,6 4,0",                                             // M
    "0,0 0,6 4,0 4,6",                                                 // N
    "1,0 0,1 0,5 1,6 3,6 4,5 4,1 3,0 1,0",                             // O
    "0,0 0,6 3,6 4,5 4,4 3,3 0,3",                                     // P
    "1,0 0,1 0,5 1,6 3,6 4,5 4,1 3,0 1,0; 2,2 4,0",                    // Q
    "0,0 0,6 3,6 4,5 4,4 3,3 0,3; 2,3 4,0",                            // R
    "4,5 3,6 1,6 0,5 0,4 1,3 3,3 4,2 4,1 3,0 1,0 0,1",                 // S
    "0,6 4,6; 2,6 2,0",                                                // T
    "0,6 0,1 1,0 3,0 4,1 4,6",                                         // U
    "0,6 2,0 4,6",                                                     // V
    "0,6 1,0 2,3 3,0 4,6",                                             // W
    "0,0 4,6; 0,6 4,0",                                                // X
    "0,6 2,3 4,6; 2,3 2,0",                                            // Y
    "0,6 4,6 0,0 4,0",                                                 // Z
    "1,0 0,1 0,5 1,6 3,6 4,5 4,1 3,0 1,0; 0,1 4,5",                    // 0
    "1,5 2,6 2,0; 1,0 3,0",                                            // 1
    "0,5 1,6 3,6 4,5 4,4 0,0 4,0",                                     // 2
    "0,5 1,6 3,6 4,5 4,4 3,3 4,2 4,1 3,0 1,0 0,1; 1,3 3,3",            // 3
    "3,0 3,6 0,2 4,2",                                                 // 4
    "4,6 0,6 0,3 3,3 4,2 4,1 3,0 0,0",                                 // 5
    "4,5 3,6 1,6 0,5 0,1 1,0 3,0 4,1 4,2 3,3 0,3",                     // 6
    "0,6 4,6 1,0",                                                     // 7
    "1,3 0,4 0,5 1,6 3,6 4,5 4,4 3,3 1,3 0,2 0,1 1,0 3,0 4,1 4,2 3,3", // 8
    "0,1 1,0 3,0 4,1 4,5 3,6 1,6 0,5 0,4 1,3 4,3",                     // 9
};

inline GlyphStrokes parse_glyph(std::string_view src) {
  GlyphStrokes strokes(1);
  std::string text(src);
  for (char& c : text) {
    if (c == ',') c = ' ';
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(';', pos), text.size());
    std::istringstream in(text.substr(pos, end - pos));
    double x = 0, y = 0;
    while (in >> x >> y) strokes.back().push_back({x, y});
    if (end >= text.size()) break;
    strokes.emplace_back();
    pos = end + 1;
  }
  return strokes;
}

}  // namespace detail

/// Strokes for `c` in grid units; empty for characters outside [A-Z0-9].
inline const GlyphStrokes& glyph_strokes(char c) {
  static const std::array<GlyphStrokes, 36> table = [] {
    std::array<GlyphStrokes, 36> t;
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = detail::parse_glyph(detail::kGlyphSource[i]);
    return t;
  }();
  static const GlyphStrokes none;
  if (c >= 'A' && c <= 'Z') return table[static_cast<std::size_t>(c - 'A')];
  if (c >= '0' && c <= '9') return table[26 + static_cast<std::size_t>(c - '0')];
  return none;
}

}  // namespace geomforge
