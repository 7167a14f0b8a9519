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


// geomforge command-line tool: generate, eval, encode, decode, preview,
// inspect. Exit status: 0 success, 1 fatal config or I/O error, 2 when
// generation exceeds the allowed resample-exhaustion rate.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "geomforge/config.hpp"
#include "geomforge/evaluation.hpp"
#include "geomforge/pipeline.hpp"
#include "geomforge/png_io.hpp"
#include "geomforge/poly_codec.hpp"
#include "geomforge/renderer.hpp"

namespace {

using namespace geomforge;

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitValidation = 2;

std::string read_all(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct ConfigArgs {
  std::string config_path;
  std::optional<std::int64_t> count;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "YAML config file")->check(CLI::ExistingFile);
    app->add_option("--count", count, "number of samples (sample_count)");
    app->add_option("--seed", seed, "master seed (master_seed)");
    app->add_option("--workers", workers, "worker threads (worker_count)");
    app->add_option("--out", out, "output directory (output_dir)");
    app->allow_extras();
  }

  GenConfig resolve(const std::vector<std::string>& extras) const {
    std::vector<std::string> overrides = extras;
    const auto push = [&](const char* key, const std::string& v) {
      overrides.push_back(std::string("--") + key);
      overrides.push_back(v);
    };
    if (count) push("sample_count", std::to_string(*count));
    if (seed) push("master_seed", std::to_string(*seed));
    if (workers) push("worker_count", std::to_string(*workers));
    if (out) push("output_dir", *out);
    return resolve_config(config_path, overrides);
  }
};

int run_generate(const GenConfig& cfg, bool quiet) {
  const GenerationResult r = generate(cfg);
  if (!quiet) {
    std::printf("wrote %zu samples (%lld targets) to %s\n", r.records.size(),
                static_cast<long long>(r.stats.target_count), cfg.output_dir.c_str());
    std::printf("exhausted attempts: %lld (rate %.4f, limit %.4f)\n",
                static_cast<long long>(r.stats.exhausted_attempts), r.stats.exhaustion_rate(),
                cfg.max_exhaustion_rate);
  }
  if (r.validation_failed) {
    std::fprintf(stderr, "generate: resample exhaustion above the allowed rate\n");
    return kExitValidation;
  }
  return kExitOk;
}

int run_eval(const std::string& manifest, const std::string& predictions, double beta, int workers,
             const std::string& report_path, bool per_target) {
  const EvalReport r = evaluate_files(manifest, predictions, beta, workers);
  std::cout << format_table(r);
  if (!report_path.empty()) {
    std::ofstream f(report_path);
    if (!f) throw IoError("cannot write " + report_path);
    f << to_json(r, per_target).dump(2) << "\n";
  }
  return kExitOk;
}

int run_encode(const std::string& mask_path, double eps, const std::string& out_path) {
  const std::string tokens = mask_to_tokens(read_png_mask(mask_path), eps);
  if (out_path.empty()) {
    std::cout << tokens << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) throw IoError("cannot write " + out_path);
    f << tokens << "\n";
  }
  return kExitOk;
}

int run_decode(std::string tokens, const std::string& tokens_file, int width, int height,
               const std::string& out_path) {
  if (!tokens_file.empty()) tokens = read_all(tokens_file);
  write_png(out_path, tokens_to_mask(tokens, width, height));
  return kExitOk;
}

int run_preview(const GenConfig& cfg, std::int64_t index, const std::string& target,
                const std::string& out_path, const std::string& tikz_path) {
  const GenConfig c = cfg;
  std::optional<SampleDraft> draft;
  for (int attempt = 0; attempt < c.max_attempts && !draft; ++attempt) {
    RngStream rng = RngStream::derive(c.master_seed, static_cast<std::uint64_t>(index),
                                      static_cast<std::uint64_t>(attempt));
    try {
      draft = draft_sample(c, rng);
    } catch (const GenerationExhausted&) {
    }
  }
  if (!draft) throw GenerationExhausted("preview: every attempt exhausted");
  const auto targets = enumerate_targets(draft->scene);
  ElementId id = targets.front().element_id;
  if (!target.empty()) {
    id = parse_element_id(target);
    if (draft->scene.find(id) == nullptr) throw InvalidElementId("preview: no element " + target);
  }
  const SceneRasterizer raster(draft->scene, {.dpi = draft->dpi, .supersample_factor = c.supersample});
  write_png(out_path, raster.highlight_image(id));
  if (!tikz_path.empty()) {
    std::ofstream f(tikz_path);
    if (!f) throw IoError("cannot write " + tikz_path);
    f << emit_tikz(draft->scene, id);
  }
  std::printf("sample %lld: %s at %d dpi (%dx%d px), target %s\n", static_cast<long long>(index),
              std::string(to_string(draft->shape.kind)).c_str(), draft->dpi, raster.width(),
              raster.height(), id.str().c_str());
  return kExitOk;
}

int run_inspect(const std::string& path) {
  namespace fs = std::filesystem;
  fs::path manifest = path;
  if (fs::is_directory(manifest)) manifest /= "manifest.jsonl";
  const auto rows = read_manifest(manifest.string());
  std::optional<Json> stats;
  const fs::path stats_path = manifest.parent_path() / "stats.json";
  if (fs::exists(stats_path)) {
    try {
      stats = Json::parse(read_all(stats_path.string()));
    } catch (const Json::exception& e) {
      throw IoError("malformed " + stats_path.string() + ": " + e.what());
    }
  }
  std::cout << inspect_report(rows, stats ? &*stats : nullptr);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic geometry diagram / mask / expression dataset tool"};
  app.require_subcommand(1);

  ConfigArgs gen_args;
  bool quiet = false;
  auto* gen = app.add_subcommand("generate", "generate a dataset; extra --key value pairs override config keys");
  gen_args.attach(gen);
  gen->add_flag("--quiet", quiet, "suppress the summary");

  std::string manifest, predictions, report_path;
  double beta = kDefaultBeta;
  int eval_workers = 1;
  bool per_target = false;
  auto* ev = app.add_subcommand("eval", "score predictions against a manifest");
  ev->add_option("--manifest", manifest, "manifest.jsonl")->required()->check(CLI::ExistingFile);
  ev->add_option("--predictions", predictions, "predictions JSONL")->required()->check(CLI::ExistingFile);
  ev->add_option("--beta", beta, "boundary buffer radius in pixels")->check(CLI::NonNegativeNumber);
  ev->add_option("--workers", eval_workers, "worker threads")->check(CLI::PositiveNumber);
  ev->add_option("--report", report_path, "write the JSON report here");
  ev->add_flag("--per-target", per_target, "include per-target scores in the JSON report");

  std::string enc_mask, enc_out;
  double eps = kDefaultSimplifyEpsilon;
  auto* enc = app.add_subcommand("encode", "mask PNG to polygon token sequence");
  enc->add_option("--mask", enc_mask, "binary mask PNG")->required()->check(CLI::ExistingFile);
  enc->add_option("--epsilon", eps, "simplification tolerance in pixels")->check(CLI::NonNegativeNumber);
  enc->add_option("--out", enc_out, "write tokens here instead of stdout");

  std::string dec_tokens, dec_file, dec_out;
  int dec_w = 0, dec_h = 0;
  auto* dec = app.add_subcommand("decode", "polygon token sequence to mask PNG");
  auto* tok_opt = dec->add_option("--tokens", dec_tokens, "token sequence");
  auto* tok_file = dec->add_option("--tokens-file", dec_file, "file holding the token sequence")
                       ->check(CLI::ExistingFile);
  tok_opt->excludes(tok_file);
  dec->add_option("--width", dec_w, "mask width in pixels")->required()->check(CLI::PositiveNumber);
  dec->add_option("--height", dec_h, "mask height in pixels")->required()->check(CLI::PositiveNumber);
  dec->add_option("--out", dec_out, "output PNG")->required();

  ConfigArgs prev_args;
  std::int64_t prev_index = 0;
  std::string prev_target, prev_out, prev_tikz;
  auto* prev = app.add_subcommand("preview", "render one seeded sample with a target highlighted");
  prev_args.attach(prev);
  prev->add_option("--index", prev_index, "sample index")->check(CLI::NonNegativeNumber);
  prev->add_option("--target", prev_target, "element id, e.g. side:AB (default: first target)");
  prev->add_option("--png", prev_out, "output PNG")->required();
  prev->add_option("--tikz", prev_tikz, "also write a TikZ document");

  std::string inspect_path;
  auto* insp = app.add_subcommand("inspect", "print manifest statistics");
  insp->add_option("path", inspect_path, "dataset directory or manifest.jsonl")->required()->check(CLI::ExistingPath);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitFatal;
  }

  try {
    if (gen->parsed()) return run_generate(gen_args.resolve(gen->remaining()), quiet);
    if (ev->parsed()) return run_eval(manifest, predictions, beta, eval_workers, report_path, per_target);
    if (enc->parsed()) return run_encode(enc_mask, eps, enc_out);
    if (dec->parsed()) {
      if (tok_opt->count() == 0 && tok_file->count() == 0) throw ConfigError("decode: need --tokens or --tokens-file");
      return run_decode(dec_tokens, dec_file, dec_w, dec_h, dec_out);
    }
    if (prev->parsed()) {
      return run_preview(prev_args.resolve(prev->remaining()), prev_index, prev_target, prev_out, prev_tikz);
    }
    if (insp->parsed()) return run_inspect(inspect_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "geomforge: %s\n", e.what());
    return kExitFatal;
  }
  return kExitFatal;
}
