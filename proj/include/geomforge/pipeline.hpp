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


// Batch dataset generation: per-sample derived random streams, resolution
// policy, rendering, masks, expressions, token sequences, manifest and
// statistics.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "geomforge/error.hpp"
#include "geomforge/geom_core.hpp"
#include "geomforge/lang_gen.hpp"
#include "geomforge/mask_ops.hpp"
#include "geomforge/png_io.hpp"
#include "geomforge/poly_codec.hpp"
#include "geomforge/renderer.hpp"
#include "geomforge/rng.hpp"
#include "geomforge/scene_graph.hpp"

namespace geomforge {

using Json = nlohmann::ordered_json;

struct DpiPolicy {
  double high_fraction = 0.8;
  std::array<int, 2> high_range{250, 300};
  std::array<int, 2> low_range{72, 150};
};

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

enum class Split { Train, Val, Test };

constexpr std::string_view to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "train";
}

struct GenConfig {
  std::int64_t sample_count = 100;
  std::uint64_t master_seed = 0;
  DpiPolicy dpi_policy;
  double tau = kDefaultTau;
  SplitRatios split_ratios;
  double draw_diagonals_prob = 0.0;
  double p_drop = 0.1;
  /// Also render one element-dropout image per target.
  bool dropout_variants = false;
  std::vector<int> dilation_choices{2, 3, 4};
  /// Dilation applied to a target mask before polygon encoding.
  int token_dilation = 2;
  double simplify_epsilon = kDefaultSimplifyEpsilon;
  int supersample = 4;
  double stroke_width = kDefaultStrokeWidth;
  bool emit_tikz = false;
  /// Wall-clock phase totals in stats.json; off by default because timing
  /// makes the output directory non-reproducible.
  bool record_timing = false;
  /// Resample exhaustion above this fraction of samples is a validation failure.
  double max_exhaustion_rate = 0.01;
  int max_attempts = 16;
  std::string output_dir = "dataset";
  int worker_count = 1;

  void validate() const {
    const auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (sample_count < 0) fail("sample_count must be >= 0");
    const auto& d = dpi_policy;
    if (!(d.high_fraction >= 0.0 && d.high_fraction <= 1.0)) fail("dpi.high_fraction must lie in [0, 1]");
    for (const auto& r : {d.high_range, d.low_range}) {
      if (r[0] > r[1]) fail("dpi ranges must be non-empty");
      if (r[0] < 72 || r[1] > 600) fail("dpi ranges must lie in [72, 600]");
    }
    const auto& s = split_ratios;
    if (s.train < 0 || s.val < 0 || s.test < 0 || std::abs(s.train + s.val + s.test - 1.0) > 1e-9) {
      fail("split ratios must be non-negative and sum to 1");
    }
    if (!(draw_diagonals_prob >= 0 && draw_diagonals_prob <= 1)) fail("draw_diagonals_prob must lie in [0, 1]");
    if (!(p_drop >= 0 && p_drop <= 1)) fail("p_drop must lie in [0, 1]");
    if (dilation_choices.empty()) fail("dilation_choices must be non-empty");
    for (int r : dilation_choices) {
      if (r < 0) fail("dilation_choices must be >= 0");
    }
    if (token_dilation < 0) fail("token_dilation must be >= 0");
    if (!(simplify_epsilon >= 0)) fail("simplify_epsilon must be >= 0");
    if (supersample < 1 || supersample > 8) fail("supersample must lie in [1, 8]");
    if (!(stroke_width > 0)) fail("stroke_width must be > 0");
    if (!(tau >= 0 && tau < 255)) fail("tau must lie in [0, 255)");
    if (worker_count < 1) fail("worker_count must be >= 1");
    if (max_attempts < 1) fail("max_attempts must be >= 1");
    if (!(max_exhaustion_rate >= 0 && max_exhaustion_rate <= 1)) fail("max_exhaustion_rate must lie in [0, 1]");
  }
};

/// Deterministic hash-based split of a sample index.
inline Split split_assign(std::uint64_t id, const SplitRatios& r = {}) {
  const double u = static_cast<double>(splitmix64(id ^ 0x5851f42d4c957f2dULL) >> 11) * 0x1.0p-53;
  if (u < r.train) return Split::Train;
  if (u < r.train + r.val) return Split::Val;
  return r.test > 0 || r.val == 0 ? Split::Test : Split::Val;
}

struct ExpressionRecord {
  ComplexityLevel level = ComplexityLevel::Direct;
  std::string text;
};

struct TargetRecord {
  std::string element_id;
  TargetKind target_kind = TargetKind::Side;
  std::string mask_path;
  std::string dilated_mask_path;
  int dilation_radius = 0;
  std::vector<ExpressionRecord> expressions;
  std::string token_seq;
  std::size_t polygon_tokens = 0;
  std::size_t rle_tokens = 0;
  std::optional<std::string> dropout_image_path;
  int width_px = 0;
  int height_px = 0;
};

struct PhaseTimes {
  double construct_s = 0.0;
  double render_s = 0.0;
  double masks_s = 0.0;
};

struct SampleRecord {
  std::int64_t index = 0;
  std::string id;
  Split split = Split::Train;
  ShapeKind shape_kind = ShapeKind::Parallelogram;
  std::uint64_t seed = 0;
  int attempt = 0;
  int dpi = 0;
  bool draw_diagonals = false;
  std::array<Point2, 4> vertices{};
  std::string image_path;
  std::optional<std::string> tikz_path;
  int width_px = 0;
  int height_px = 0;
  std::vector<TargetRecord> targets;
  PhaseTimes times;  // not serialized
};

inline bool is_high_dpi(int dpi) { return dpi >= 250; }
inline std::string_view dpi_band(int dpi) { return is_high_dpi(dpi) ? "high" : "low"; }

inline std::string sample_id(std::int64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06lld", static_cast<long long>(index));
  return buf;
}

// -- JSON ---------------------------------------------------------------------------

inline Json to_json(const TargetRecord& t) {
  Json j;
  j["element_id"] = t.element_id;
  j["target_kind"] = std::string(to_string(t.target_kind));
  j["mask_path"] = t.mask_path;
  j["dilated_mask_path"] = t.dilated_mask_path;
  j["dilation_radius"] = t.dilation_radius;
  Json ex = Json::array();
  for (const auto& e : t.expressions) {
    ex.push_back({{"level", std::string(to_string(e.level))},
                  {"text", e.text},
                  {"length_band", std::string(length_band(word_count(e.text)))}});
  }
  j["expressions"] = ex;
  j["token_seq"] = t.token_seq;
  j["polygon_tokens"] = t.polygon_tokens;
  j["rle_tokens"] = t.rle_tokens;
  if (t.dropout_image_path) j["dropout_image_path"] = *t.dropout_image_path;
  j["width_px"] = t.width_px;
  j["height_px"] = t.height_px;
  return j;
}

inline Json to_json(const SampleRecord& s) {
  Json j;
  j["id"] = s.id;
  j["index"] = s.index;
  j["split"] = std::string(to_string(s.split));
  j["shape_kind"] = std::string(to_string(s.shape_kind));
  j["seed"] = s.seed;
  j["attempt"] = s.attempt;
  j["dpi"] = s.dpi;
  j["dpi_band"] = std::string(dpi_band(s.dpi));
  j["draw_diagonals"] = s.draw_diagonals;
  Json v = Json::array();
  for (const auto& p : s.vertices) v.push_back({p.x, p.y});
  j["vertices"] = v;
  j["image_path"] = s.image_path;
  if (s.tikz_path) j["tikz_path"] = *s.tikz_path;
  j["width_px"] = s.width_px;
  j["height_px"] = s.height_px;
  Json ts = Json::array();
  for (const auto& t : s.targets) ts.push_back(to_json(t));
  j["targets"] = ts;
  return j;
}

inline SampleRecord sample_from_json(const Json& j) {
  try {
    SampleRecord s;
    s.id = j.at("id").get<std::string>();
    s.index = j.at("index").get<std::int64_t>();
    const std::string split = j.at("split").get<std::string>();
    s.split = split == "train" ? Split::Train : split == "val" ? Split::Val : Split::Test;
    const auto kind = parse_shape_kind(j.at("shape_kind").get<std::string>());
    if (!kind) throw ManifestMismatch("unknown shape_kind in manifest row " + s.id);
    s.shape_kind = *kind;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.attempt = j.value("attempt", 0);
    s.dpi = j.at("dpi").get<int>();
    s.draw_diagonals = j.value("draw_diagonals", false);
    if (j.contains("vertices")) {
      for (std::size_t i = 0; i < 4; ++i) {
        s.vertices[i] = {j["vertices"][i][0].get<double>(), j["vertices"][i][1].get<double>()};
      }
    }
    s.image_path = j.at("image_path").get<std::string>();
    if (j.contains("tikz_path")) s.tikz_path = j["tikz_path"].get<std::string>();
    s.width_px = j.at("width_px").get<int>();
    s.height_px = j.at("height_px").get<int>();
    for (const auto& tj : j.at("targets")) {
      TargetRecord t;
      t.element_id = tj.at("element_id").get<std::string>();
      const auto tk = parse_target_kind(tj.at("target_kind").get<std::string>());
      if (!tk) throw ManifestMismatch("unknown target_kind in manifest row " + s.id);
      t.target_kind = *tk;
      t.mask_path = tj.at("mask_path").get<std::string>();
      t.dilated_mask_path = tj.value("dilated_mask_path", std::string());
      t.dilation_radius = tj.value("dilation_radius", 0);
      for (const auto& ej : tj.value("expressions", Json::array())) {
        const auto lvl = parse_level(ej.at("level").get<std::string>());
        if (!lvl) throw ManifestMismatch("unknown expression level in manifest row " + s.id);
        t.expressions.push_back({*lvl, ej.at("text").get<std::string>()});
      }
      t.token_seq = tj.value("token_seq", std::string());
      t.polygon_tokens = tj.value("polygon_tokens", std::size_t{0});
      t.rle_tokens = tj.value("rle_tokens", std::size_t{0});
      if (tj.contains("dropout_image_path")) t.dropout_image_path = tj["dropout_image_path"].get<std::string>();
      t.width_px = tj.at("width_px").get<int>();
      t.height_px = tj.at("height_px").get<int>();
      s.targets.push_back(std::move(t));
    }
    return s;
  } catch (const Json::exception& e) {
    throw ManifestMismatch(std::string("malformed manifest row: ") + e.what());
  }
}

inline std::vector<SampleRecord> read_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read manifest " + path);
  std::vector<SampleRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::exception& e) {
      throw ManifestMismatch(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(sample_from_json(j));
  }
  return out;
}

// -- per-sample generation -----------------------------------------------------------

struct RenderedSample {
  SampleRecord record;
  RasterImage image;
  struct TargetOutputs {
    BinaryMask mask;
    BinaryMask dilated;
    std::optional<RasterImage> dropout_image;
  };
  std::vector<TargetOutputs> outputs;
  std::string tikz;
};

inline int sample_dpi(const DpiPolicy& p, RngStream& rng) {
  const bool high = rng.bernoulli(p.high_fraction);
  const auto& r = high ? p.high_range : p.low_range;
  return static_cast<int>(rng.uniform_int(r[0], r[1]));
}

/// Scene and DPI for one stream, before any rendering.
struct SampleDraft {
  ShapeInstance shape;
  Scene scene;
  bool draw_diagonals = false;
  int dpi = 0;
};

inline SampleDraft draft_sample(const GenConfig& cfg, RngStream& rng) {
  SampleDraft d;
  const ShapeKind kind = sample_kind(rng);
  d.shape = sample_shape(kind, rng);
  d.draw_diagonals = rng.bernoulli(cfg.draw_diagonals_prob);
  d.scene = build_scene(d.shape, {.draw_diagonals = d.draw_diagonals, .stroke_width = cfg.stroke_width});
  d.dpi = sample_dpi(cfg.dpi_policy, rng);
  return d;
}

/// Everything for sample `index`, in memory. Returns the number of
/// exhausted attempts through `exhausted`.
inline RenderedSample render_sample(const GenConfig& cfg, std::int64_t index, int& exhausted) {
  using Clock = std::chrono::steady_clock;
  const auto secs = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };
  exhausted = 0;
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    const auto t0 = Clock::now();
    RngStream rng = RngStream::derive(cfg.master_seed, static_cast<std::uint64_t>(index),
                                      static_cast<std::uint64_t>(attempt));
    SampleDraft d;
    try {
      d = draft_sample(cfg, rng);
    } catch (const GenerationExhausted&) {
      ++exhausted;
      continue;
    }
    RenderedSample out;
    SampleRecord& rec = out.record;
    rec.index = index;
    rec.id = sample_id(index);
    rec.split = split_assign(static_cast<std::uint64_t>(index), cfg.split_ratios);
    rec.shape_kind = d.shape.kind;
    rec.seed = RngStream::derive_key(cfg.master_seed, static_cast<std::uint64_t>(index),
                                     static_cast<std::uint64_t>(attempt));
    rec.attempt = attempt;
    rec.dpi = d.dpi;
    rec.draw_diagonals = d.draw_diagonals;
    rec.vertices = d.shape.vertices;
    rec.image_path = "images/" + rec.id + ".png";
    if (cfg.emit_tikz) {
      rec.tikz_path = "tikz/" + rec.id + ".tex";
      out.tikz = emit_tikz(d.scene);
    }
    const auto t1 = Clock::now();

    const RenderStyle style{.dpi = d.dpi, .supersample_factor = cfg.supersample};
    const SceneRasterizer raster(d.scene, style);
    out.image = raster.image();
    rec.width_px = raster.width();
    rec.height_px = raster.height();
    const auto t2 = Clock::now();

    const auto targets = enumerate_targets(d.scene);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const Target& t = targets[k];
      TargetRecord tr;
      tr.element_id = t.element_id.str();
      tr.target_kind = t.target_kind;
      const std::string stem = "masks/" + rec.id + "_t" + std::to_string(k);
      tr.mask_path = stem + ".png";
      tr.dilated_mask_path = stem + "_dil.png";
      RenderedSample::TargetOutputs o;
      o.mask = raster.mask(t.element_id, cfg.tau);
      tr.dilation_radius = cfg.dilation_choices[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(cfg.dilation_choices.size()) - 1))];
      o.dilated = dilate(o.mask, tr.dilation_radius);
      for (const auto& e : describe_all(t, d.scene, rng)) tr.expressions.push_back({e.level, e.text});
      const auto polys =
          mask_to_polygons(dilate(o.mask, cfg.token_dilation), cfg.simplify_epsilon);
      tr.token_seq = encode_tokens(polys);
      tr.polygon_tokens = polygon_token_count(polys);
      tr.rle_tokens = rle_encode(o.mask).token_count();
      if (cfg.dropout_variants) {
        const Scene dropped = drop_non_target(d.scene, t, cfg.p_drop, rng);
        o.dropout_image = render_scene(dropped, style);
        tr.dropout_image_path = "images/" + rec.id + "_t" + std::to_string(k) + "_drop.png";
      }
      tr.width_px = rec.width_px;
      tr.height_px = rec.height_px;
      rec.targets.push_back(std::move(tr));
      out.outputs.push_back(std::move(o));
    }
    const auto t3 = Clock::now();
    rec.times = {secs(t0, t1), secs(t1, t2), secs(t2, t3)};
    return out;
  }
  throw GenerationExhausted("sample " + std::to_string(index) + ": every attempt exhausted");
}

inline void write_text_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot write " + p.string());
  f << text;
  if (!f.flush()) throw IoError("failed writing " + p.string());
}

inline void write_sample_files(const std::filesystem::path& root, const RenderedSample& s) {
  const auto& rec = s.record;
  write_png((root / rec.image_path).string(), s.image);
  if (rec.tikz_path) write_text_file(root / *rec.tikz_path, s.tikz);
  for (std::size_t k = 0; k < rec.targets.size(); ++k) {
    const auto& t = rec.targets[k];
    write_png((root / t.mask_path).string(), s.outputs[k].mask);
    write_png((root / t.dilated_mask_path).string(), s.outputs[k].dilated);
    if (t.dropout_image_path) write_png((root / *t.dropout_image_path).string(), *s.outputs[k].dropout_image);
  }
}

// -- statistics ------------------------------------------------------------------------

struct GenerationStats {
  std::int64_t sample_count = 0;
  std::int64_t exhausted_attempts = 0;
  std::int64_t failed_samples = 0;
  std::map<std::string, std::int64_t> kinds, splits, dpi_bands, target_kinds;
  std::int64_t target_count = 0;
  int dpi_min = 0, dpi_max = 0;
  PhaseTimes total_times;
  double wall_s = 0.0;

  double exhaustion_rate() const {
    return sample_count ? static_cast<double>(exhausted_attempts) / sample_count : 0.0;
  }
};

inline GenerationStats summarize(const std::vector<SampleRecord>& rows) {
  GenerationStats st;
  st.sample_count = static_cast<std::int64_t>(rows.size());
  for (ShapeKind k : kAllShapeKinds) st.kinds[std::string(to_string(k))] = 0;
  for (Split s : {Split::Train, Split::Val, Split::Test}) st.splits[std::string(to_string(s))] = 0;
  st.dpi_bands = {{"high", 0}, {"low", 0}};
  bool first = true;
  for (const auto& r : rows) {
    ++st.kinds[std::string(to_string(r.shape_kind))];
    ++st.splits[std::string(to_string(r.split))];
    ++st.dpi_bands[std::string(dpi_band(r.dpi))];
    st.dpi_min = first ? r.dpi : std::min(st.dpi_min, r.dpi);
    st.dpi_max = first ? r.dpi : std::max(st.dpi_max, r.dpi);
    first = false;
    for (const auto& t : r.targets) {
      ++st.target_kinds[std::string(to_string(t.target_kind))];
      ++st.target_count;
    }
    st.total_times.construct_s += r.times.construct_s;
    st.total_times.render_s += r.times.render_s;
    st.total_times.masks_s += r.times.masks_s;
  }
  return st;
}

/// Config keys that change the generated content (paths and worker count
/// are excluded so stats.json is identical across them).
inline Json config_echo(const GenConfig& c) {
  Json j;
  j["sample_count"] = c.sample_count;
  j["master_seed"] = c.master_seed;
  j["dpi"] = {{"high_fraction", c.dpi_policy.high_fraction},
              {"high_range", c.dpi_policy.high_range},
              {"low_range", c.dpi_policy.low_range}};
  j["tau"] = c.tau;
  j["splits"] = {{"train", c.split_ratios.train}, {"val", c.split_ratios.val}, {"test", c.split_ratios.test}};
  j["draw_diagonals_prob"] = c.draw_diagonals_prob;
  j["p_drop"] = c.p_drop;
  j["dropout_variants"] = c.dropout_variants;
  j["dilation_choices"] = c.dilation_choices;
  j["token_dilation"] = c.token_dilation;
  j["simplify_epsilon"] = c.simplify_epsilon;
  j["supersample"] = c.supersample;
  j["stroke_width"] = c.stroke_width;
  j["emit_tikz"] = c.emit_tikz;
  return j;
}

inline Json stats_json(const GenerationStats& st, const GenConfig& cfg) {
  Json j;
  j["sample_count"] = st.sample_count;
  j["target_count"] = st.target_count;
  j["exhausted_attempts"] = st.exhausted_attempts;
  j["exhaustion_rate"] = st.exhaustion_rate();
  j["failed_samples"] = st.failed_samples;
  j["kinds"] = st.kinds;
  j["splits"] = st.splits;
  j["dpi_bands"] = st.dpi_bands;
  j["dpi_range"] = {st.dpi_min, st.dpi_max};
  j["target_kinds"] = st.target_kinds;
  j["config"] = config_echo(cfg);
  if (cfg.record_timing) {
    j["timing"] = {{"wall_s", st.wall_s},
                   {"construct_s", st.total_times.construct_s},
                   {"render_s", st.total_times.render_s},
                   {"masks_s", st.total_times.masks_s},
                   {"samples_per_s", st.wall_s > 0 ? st.sample_count / st.wall_s : 0.0}};
  }
  return j;
}

/// True when the run must be reported as a validation failure.
inline bool exceeds_exhaustion_limit(const GenerationStats& st, const GenConfig& cfg) {
  return st.exhaustion_rate() > cfg.max_exhaustion_rate || st.failed_samples > 0;
}

struct GenerationResult {
  std::vector<SampleRecord> records;
  GenerationStats stats;
  bool validation_failed = false;  // exhaustion above the configured rate
};

/// Runs the pipeline into `cfg.output_dir`. Workers claim sample indices
/// from a shared counter; each sample's content depends only on
/// (master_seed, index), and the manifest is written in index order.
inline GenerationResult generate(const GenConfig& cfg) {
  cfg.validate();
  namespace fs = std::filesystem;
  const fs::path root(cfg.output_dir);
  std::error_code ec;
  for (const char* sub : {"images", "masks"}) fs::create_directories(root / sub, ec);
  if (cfg.emit_tikz) fs::create_directories(root / "tikz", ec);
  if (ec) throw IoError("cannot create output directory " + root.string() + ": " + ec.message());

  const auto start = std::chrono::steady_clock::now();
  const auto n = static_cast<std::size_t>(cfg.sample_count);
  std::vector<SampleRecord> records(n);
  std::vector<char> done(n, 0);
  std::atomic<std::int64_t> next{0};
  std::atomic<std::int64_t> exhausted_total{0};
  std::atomic<bool> abort{false};
  std::exception_ptr failure;
  std::mutex failure_mu;

  const auto worker = [&] {
    while (!abort.load()) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= cfg.sample_count) return;
      int exhausted = 0;
      try {
        RenderedSample s = render_sample(cfg, i, exhausted);
        exhausted_total += exhausted;
        write_sample_files(root, s);
        records[static_cast<std::size_t>(i)] = std::move(s.record);
        done[static_cast<std::size_t>(i)] = 1;
      } catch (const GenerationExhausted&) {
        exhausted_total += cfg.max_attempts;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        abort = true;
      }
    }
  };
  const int workers = std::max(1, std::min<int>(cfg.worker_count, static_cast<int>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  GenerationResult result;
  std::ostringstream manifest;
  for (std::size_t i = 0; i < n; ++i) {
    if (!done[i]) continue;
    manifest << to_json(records[i]).dump() << '\n';
    result.records.push_back(std::move(records[i]));
  }
  result.stats = summarize(result.records);
  result.stats.exhausted_attempts = exhausted_total.load();
  result.stats.failed_samples = static_cast<std::int64_t>(n - result.records.size());
  // Conservation is measured against the requested count.
  result.stats.sample_count = cfg.sample_count;
  result.stats.wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text_file(root / "manifest.jsonl", manifest.str());
  write_text_file(root / "stats.json", stats_json(result.stats, cfg).dump(2) + "\n");
  result.validation_failed = exceeds_exhaustion_limit(result.stats, cfg);
  return result;
}

/// Histogram report for a manifest (and its stats.json when present).
inline std::string inspect_report(const std::vector<SampleRecord>& rows,
                                  const Json* stats = nullptr) {
  const GenerationStats st = summarize(rows);
  std::ostringstream out;
  char buf[160];
  const auto hist = [&](const char* title, const std::map<std::string, std::int64_t>& h) {
    out << title << "\n";
    std::int64_t total = 0;
    for (const auto& [k, v] : h) total += v;
    for (const auto& [k, v] : h) {
      std::snprintf(buf, sizeof buf, "  %-22s %8lld  %6.2f%%\n", k.c_str(), static_cast<long long>(v),
                    total ? 100.0 * static_cast<double>(v) / static_cast<double>(total) : 0.0);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "  %-22s %8lld\n", "total", static_cast<long long>(total));
    out << buf;
  };
  out << "samples: " << st.sample_count << "  targets: " << st.target_count << "\n";
  hist("shape kinds", st.kinds);
  hist("splits", st.splits);
  hist("dpi bands", st.dpi_bands);
  out << "  dpi range: [" << st.dpi_min << ", " << st.dpi_max << "]\n";
  hist("target kinds", st.target_kinds);
  if (stats && stats->contains("timing")) {
    const auto& t = (*stats)["timing"];
    std::snprintf(buf, sizeof buf,
                  "timing\n  wall %.2f s  construct %.2f s  render %.2f s  masks %.2f s  (%.3f samples/s)\n",
                  t.value("wall_s", 0.0), t.value("construct_s", 0.0), t.value("render_s", 0.0),
                  t.value("masks_s", 0.0), t.value("samples_per_s", 0.0));
    out << buf;
  } else {
    out << "timing: not recorded (set record_timing: true)\n";
  }
  if (stats && stats->contains("exhausted_attempts")) {
    out << "exhausted attempts: " << (*stats)["exhausted_attempts"].get<std::int64_t>() << "\n";
  }
  return out.str();
}

}  // namespace geomforge
