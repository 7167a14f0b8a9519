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


// Generation config: a YAML file of nested sections, flattened to dotted
// keys, with `--key value` overrides and the GEOMFORGE_SEED environment
// variable layered on top.

#pragma once

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cstdlib>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "geomforge/error.hpp"
#include "geomforge/pipeline.hpp"

namespace geomforge {

/// Dotted key -> raw scalar text. Sequences are stored comma-joined.
using FlatConfig = std::map<std::string, std::string>;

namespace detail {

inline void flatten_yaml(const YAML::Node& node, const std::string& prefix, FlatConfig& out) {
  switch (node.Type()) {
    case YAML::NodeType::Map:
      for (const auto& kv : node) {
        const std::string key = kv.first.as<std::string>();
        flatten_yaml(kv.second, prefix.empty() ? key : prefix + "." + key, out);
      }
      break;
    case YAML::NodeType::Sequence: {
      std::string joined;
      for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].IsScalar()) throw ConfigError("config key " + prefix + ": nested sequences unsupported");
        if (i) joined += ",";
        joined += node[i].as<std::string>();
      }
      out[prefix] = joined;
      break;
    }
    case YAML::NodeType::Scalar:
      out[prefix] = node.as<std::string>();
      break;
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      break;
  }
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n[");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n]");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  T v{};
  const char* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (s.empty() || r.ec != std::errc() || r.ptr != end) {
    throw ConfigError("config key " + key + ": cannot parse '" + raw + "' as a number");
  }
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("config key " + key + ": cannot parse '" + raw + "' as a boolean");
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& raw) {
  std::vector<T> out;
  std::string_view rest = raw;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_number<T>(key, std::string(rest.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

inline std::array<int, 2> parse_range(const std::string& key, const std::string& raw) {
  const auto v = parse_list<int>(key, raw);
  if (v.size() != 2) throw ConfigError("config key " + key + ": expected two values");
  return {v[0], v[1]};
}

}  // namespace detail

inline FlatConfig parse_config_text(const std::string& text, const std::string& origin = "<config>") {
  FlatConfig out;
  try {
    const YAML::Node root = YAML::Load(text);
    if (!root.IsNull() && !root.IsMap()) throw ConfigError(origin + ": top level must be a mapping");
    detail::flatten_yaml(root, "", out);
  } catch (const YAML::Exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return out;
}

inline FlatConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

/// Applies `--key value` / `--key=value` pairs. Keys are dotted config keys;
/// '-' is accepted in place of '_'.
inline void apply_overrides(FlatConfig& cfg, const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string a = args[i];
    if (a.rfind("--", 0) != 0) throw ConfigError("unexpected argument '" + a + "'");
    a = a.substr(2);
    std::string value;
    if (const auto eq = a.find('='); eq != std::string::npos) {
      value = a.substr(eq + 1);
      a = a.substr(0, eq);
    } else {
      if (i + 1 >= args.size()) throw ConfigError("option --" + a + " needs a value");
      value = args[++i];
    }
    for (char& c : a) {
      if (c == '-') c = '_';
    }
    cfg[a] = value;
  }
}

/// Builds and validates a GenConfig. Unknown keys are errors.
inline GenConfig build_config(const FlatConfig& flat) {
  using namespace detail;
  GenConfig c;
  for (const auto& [key, raw] : flat) {
    if (key == "sample_count") c.sample_count = parse_number<std::int64_t>(key, raw);
    else if (key == "master_seed") c.master_seed = parse_number<std::uint64_t>(key, raw);
    else if (key == "dpi.high_fraction") c.dpi_policy.high_fraction = parse_number<double>(key, raw);
    else if (key == "dpi.high_range") c.dpi_policy.high_range = parse_range(key, raw);
    else if (key == "dpi.low_range") c.dpi_policy.low_range = parse_range(key, raw);
    else if (key == "tau") c.tau = parse_number<double>(key, raw);
    else if (key == "splits.train") c.split_ratios.train = parse_number<double>(key, raw);
    else if (key == "splits.val") c.split_ratios.val = parse_number<double>(key, raw);
    else if (key == "splits.test") c.split_ratios.test = parse_number<double>(key, raw);
    else if (key == "draw_diagonals_prob") c.draw_diagonals_prob = parse_number<double>(key, raw);
    else if (key == "p_drop") c.p_drop = parse_number<double>(key, raw);
    else if (key == "dropout_variants") c.dropout_variants = parse_bool(key, raw);
    else if (key == "dilation_choices") c.dilation_choices = parse_list<int>(key, raw);
    else if (key == "token_dilation") c.token_dilation = parse_number<int>(key, raw);
    else if (key == "simplify_epsilon") c.simplify_epsilon = parse_number<double>(key, raw);
    else if (key == "supersample") c.supersample = parse_number<int>(key, raw);
    else if (key == "stroke_width") c.stroke_width = parse_number<double>(key, raw);
    else if (key == "emit_tikz") c.emit_tikz = parse_bool(key, raw);
    else if (key == "record_timing") c.record_timing = parse_bool(key, raw);
    else if (key == "max_exhaustion_rate") c.max_exhaustion_rate = parse_number<double>(key, raw);
    else if (key == "max_attempts") c.max_attempts = parse_number<int>(key, raw);
    else if (key == "output_dir") c.output_dir = raw;
    else if (key == "worker_count") c.worker_count = parse_number<int>(key, raw);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  c.validate();
  return c;
}

/// Layers: file < GEOMFORGE_SEED < command-line overrides.
inline GenConfig resolve_config(const std::string& path, const std::vector<std::string>& overrides) {
  FlatConfig flat = path.empty() ? FlatConfig{} : load_config_file(path);
  if (const char* env = std::getenv("GEOMFORGE_SEED"); env != nullptr && *env != '\0') {
    flat["master_seed"] = env;
  }
  apply_overrides(flat, overrides);
  return build_config(flat);
}

}  // namespace geomforge
