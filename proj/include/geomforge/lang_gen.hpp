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

#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geomforge/error.hpp"
#include "geomforge/rng.hpp"
#include "geomforge/scene_graph.hpp"

namespace geomforge {

enum class ComplexityLevel { Direct, Descriptive, Topological };

inline constexpr std::array<ComplexityLevel, 3> kAllLevels = {
    ComplexityLevel::Direct, ComplexityLevel::Descriptive, ComplexityLevel::Topological};

constexpr std::string_view to_string(ComplexityLevel l) {
  switch (l) {
    case ComplexityLevel::Direct: return "direct";
    case ComplexityLevel::Descriptive: return "descriptive";
    case ComplexityLevel::Topological: return "topological";
  }
  return "direct";
}

inline std::optional<ComplexityLevel> parse_level(std::string_view s) {
  for (ComplexityLevel l : kAllLevels) {
    if (to_string(l) == s) return l;
  }
  return std::nullopt;
}

inline std::size_t word_count(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

/// Length band used as report metadata: short (<= 3 words), medium (4-6),
/// long (>= 7).
inline std::string_view length_band(std::size_t words) {
  if (words <= 3) return "short";
  if (words <= 6) return "medium";
  return "long";
}

struct ReferringExpression {
  std::string text;
  ComplexityLevel level = ComplexityLevel::Direct;
  ElementId target;

  std::size_t words() const { return word_count(text); }
};

/// Immutable inventory of templates keyed by (target kind, level).
class TemplateStore {
 public:
  using Key = std::pair<TargetKind, ComplexityLevel>;

  /// Lines are `kind<TAB>level<TAB>text`; blank lines and lines starting
  /// with '#' are skipped.
  static TemplateStore parse(std::string_view source) {
    TemplateStore store;
    std::istringstream in{std::string(source)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      const auto t1 = line.find('\t');
      const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
      if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
        throw ConfigError("templates line " + std::to_string(line_no) +
                          ": expected kind<TAB>level<TAB>text");
      }
      const auto kind = parse_target_kind(line.substr(0, t1));
      const auto level = parse_level(line.substr(t1 + 1, t2 - t1 - 1));
      const std::string text = line.substr(t2 + 1);
      if (!kind || !level || text.empty()) {
        throw ConfigError("templates line " + std::to_string(line_no) + ": bad kind, level or text");
      }
      store.families_[{*kind, *level}].push_back(text);
    }
    return store;
  }

  static TemplateStore load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read template file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
  }

  /// The inventory shipped with the library.
  static const TemplateStore& builtin() {
    static const TemplateStore store = parse(
#include "geomforge/default_templates.inc"
    );
    return store;
  }

  const std::vector<std::string>& family(TargetKind kind, ComplexityLevel level) const {
    static const std::vector<std::string> none;
    const auto it = families_.find({kind, level});
    return it == families_.end() ? none : it->second;
  }

  const std::map<Key, std::vector<std::string>>& families() const { return families_; }

 private:
  std::map<Key, std::vector<std::string>> families_;
};

/// Fills `{A}`..`{D}` with `labels` in order and `{shape}` with the noun.
inline std::string fill_template(std::string_view tmpl, const std::vector<std::string>& labels,
                                 std::string_view noun) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] != '{') {
      out += tmpl[i++];
      continue;
    }
    const auto close = tmpl.find('}', i);
    if (close == std::string_view::npos) throw ConfigError("unterminated slot in template");
    const std::string_view slot = tmpl.substr(i + 1, close - i - 1);
    if (slot == "shape") {
      out += noun;
    } else if (slot.size() == 1 && slot[0] >= 'A' && slot[0] <= 'D') {
      const auto k = static_cast<std::size_t>(slot[0] - 'A');
      if (k >= labels.size()) {
        throw ConfigError("template slot {" + std::string(slot) + "} has no label");
      }
      out += labels[k];
    } else {
      throw ConfigError("unknown template slot {" + std::string(slot) + "}");
    }
    i = close + 1;
  }
  return out;
}

/// One expression for `target`, drawn uniformly from its (kind, level) family.
inline ReferringExpression describe(const Target& target, const Scene& scene,
                                    ComplexityLevel level, RngStream& rng,
                                    const TemplateStore& store = TemplateStore::builtin()) {
  if (scene.find(target.element_id) == nullptr) {
    throw InvalidElementId("describe: target " + target.element_id.str() + " not in scene");
  }
  const auto& fam = store.family(target.target_kind, level);
  if (fam.empty()) {
    throw NoTemplate("no templates for (" + std::string(to_string(target.target_kind)) + ", " +
                     std::string(to_string(level)) + ")");
  }
  const auto& tmpl = fam[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(fam.size()) - 1))];
  // Label-free targets (the incircle) borrow the polygon's labels.
  std::vector<std::string> labels = target.element_id.labels;
  if (labels.empty()) labels.assign(scene.labels.begin(), scene.labels.end());
  return {fill_template(tmpl, labels, shape_noun(scene.shape_kind)), level, target.element_id};
}

/// One expression per level, in Direct, Descriptive, Topological order.
inline std::vector<ReferringExpression> describe_all(
    const Target& target, const Scene& scene, RngStream& rng,
    const TemplateStore& store = TemplateStore::builtin()) {
  std::vector<ReferringExpression> out;
  for (ComplexityLevel l : kAllLevels) out.push_back(describe(target, scene, l, rng, store));
  return out;
}

}  // namespace geomforge
