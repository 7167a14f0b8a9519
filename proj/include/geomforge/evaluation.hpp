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


// Batch evaluation of predictions against a generated manifest: per-target
// IoU and boundary IoU, stratified by target kind, expression level,
// resolution band and split.

#pragma once

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "geomforge/error.hpp"
#include "geomforge/metrics.hpp"
#include "geomforge/pipeline.hpp"
#include "geomforge/png_io.hpp"
#include "geomforge/poly_codec.hpp"

namespace geomforge {

/// One prediction row. `id` is `<sample id>/<element id>`, e.g.
/// "000042/side:AB". Exactly one of mask_path / token_seq is set.
struct Prediction {
  std::string id;
  std::optional<std::string> mask_path;  // resolved against the predictions file
  std::optional<std::string> token_seq;
  std::optional<ComplexityLevel> level;
};

inline std::string target_key(const SampleRecord& s, const TargetRecord& t) {
  return s.id + "/" + t.element_id;
}

inline std::vector<Prediction> read_predictions(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read predictions " + path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  std::vector<Prediction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    try {
      const Json j = Json::parse(line);
      Prediction p;
      p.id = j.at("id").get<std::string>();
      if (j.contains("mask_path")) p.mask_path = (base / j["mask_path"].get<std::string>()).string();
      if (j.contains("token_seq")) p.token_seq = j["token_seq"].get<std::string>();
      if (p.mask_path.has_value() == p.token_seq.has_value()) {
        throw ManifestMismatch(where + ": need exactly one of mask_path, token_seq");
      }
      if (j.contains("level")) {
        p.level = parse_level(j["level"].get<std::string>());
        if (!p.level) throw ManifestMismatch(where + ": unknown level");
      }
      out.push_back(std::move(p));
    } catch (const Json::exception& e) {
      throw ManifestMismatch(where + ": " + e.what());
    }
  }
  return out;
}

enum class ScoreStatus { Ok, Missing, Malformed };

struct TargetScore {
  std::string id;
  std::string target_kind;
  std::string dpi_band;
  std::string split;
  std::optional<std::string> level;
  ScoreStatus status = ScoreStatus::Ok;
  double iou = 0.0;
  double biou = 0.0;
};

struct Aggregate {
  std::int64_t count = 0;
  double iou_sum = 0.0;
  double biou_sum = 0.0;

  void add(const TargetScore& s) {
    ++count;
    iou_sum += s.iou;
    biou_sum += s.biou;
  }
  double mean_iou() const { return count ? iou_sum / static_cast<double>(count) : 0.0; }
  double mean_biou() const { return count ? biou_sum / static_cast<double>(count) : 0.0; }
};

struct EvalReport {
  double beta = kDefaultBeta;
  Aggregate overall;
  std::int64_t missing = 0;
  std::int64_t malformed = 0;
  std::map<std::string, Aggregate> by_target_kind, by_level, by_dpi_band, by_split;
  std::vector<TargetScore> scores;  // manifest order
};

/// Scores one prediction against its ground-truth mask. Malformed token
/// sequences, unreadable masks and dimension mismatches score 0.
inline TargetScore score_prediction(const BinaryMask& gt, const Prediction& p, double beta) {
  TargetScore s;
  std::optional<BinaryMask> pred;
  try {
    if (p.token_seq) {
      pred = tokens_to_mask(*p.token_seq, gt.width(), gt.height());
    } else {
      pred = read_png_mask(*p.mask_path);
    }
  } catch (const MalformedSequence&) {
  } catch (const IoError&) {
  }
  if (!pred || pred->width() != gt.width() || pred->height() != gt.height()) {
    s.status = ScoreStatus::Malformed;
    return s;
  }
  s.iou = iou(gt, *pred);
  s.biou = biou_pixel(gt, *pred, beta);
  return s;
}

/// Scores every manifest target. Unknown or duplicate prediction ids are
/// fatal; targets without a prediction score 0 and are tallied as missing.
inline EvalReport evaluate_batch(const std::vector<SampleRecord>& manifest,
                                 const std::filesystem::path& manifest_root,
                                 const std::vector<Prediction>& predictions,
                                 double beta = kDefaultBeta, int workers = 1) {
  if (!(beta >= 0.0)) throw ParamOutOfRange("evaluate_batch: beta must be >= 0");
  struct Job {
    const SampleRecord* sample;
    const TargetRecord* target;
    const Prediction* pred;
  };
  std::vector<Job> jobs;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& s : manifest) {
    for (const auto& t : s.targets) {
      const std::string key = target_key(s, t);
      if (!index.emplace(key, jobs.size()).second) throw ManifestMismatch("duplicate manifest target " + key);
      jobs.push_back({&s, &t, nullptr});
    }
  }
  for (const auto& p : predictions) {
    const auto it = index.find(p.id);
    if (it == index.end()) throw ManifestMismatch("prediction id " + p.id + " not in manifest");
    if (jobs[it->second].pred != nullptr) throw ManifestMismatch("duplicate prediction id " + p.id);
    jobs[it->second].pred = &p;
  }

  std::vector<TargetScore> scores(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  const auto run = [&] {
    for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
      const Job& job = jobs[i];
      try {
        TargetScore s;
        if (job.pred == nullptr) {
          s.status = ScoreStatus::Missing;
        } else {
          const BinaryMask gt = read_png_mask((manifest_root / job.target->mask_path).string());
          if (gt.width() != job.target->width_px || gt.height() != job.target->height_px) {
            throw ManifestMismatch("mask " + job.target->mask_path + " does not match recorded size");
          }
          s = score_prediction(gt, *job.pred, beta);
          if (job.pred->level) s.level = std::string(to_string(*job.pred->level));
        }
        s.id = target_key(*job.sample, *job.target);
        s.target_kind = std::string(to_string(job.target->target_kind));
        s.dpi_band = std::string(dpi_band(job.sample->dpi));
        s.split = std::string(to_string(job.sample->split));
        scores[i] = std::move(s);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  if (n_threads == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_threads; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  EvalReport r;
  r.beta = beta;
  for (const auto& s : scores) {
    r.overall.add(s);
    r.by_target_kind[s.target_kind].add(s);
    r.by_dpi_band[s.dpi_band].add(s);
    r.by_split[s.split].add(s);
    if (s.level) r.by_level[*s.level].add(s);
    if (s.status == ScoreStatus::Missing) ++r.missing;
    if (s.status == ScoreStatus::Malformed) ++r.malformed;
  }
  r.scores = std::move(scores);
  return r;
}

inline EvalReport evaluate_files(const std::string& manifest_path, const std::string& predictions_path,
                                 double beta = kDefaultBeta, int workers = 1) {
  const auto manifest = read_manifest(manifest_path);
  const auto preds = read_predictions(predictions_path);
  return evaluate_batch(manifest, std::filesystem::path(manifest_path).parent_path(), preds, beta,
                        workers);
}

inline Json to_json(const EvalReport& r, bool per_target = false) {
  const auto agg = [](const Aggregate& a) {
    return Json{{"count", a.count}, {"mean_iou", a.mean_iou()}, {"mean_biou", a.mean_biou()}};
  };
  const auto group = [&](const std::map<std::string, Aggregate>& g) {
    Json j = Json::object();
    for (const auto& [k, a] : g) j[k] = agg(a);
    return j;
  };
  Json j;
  j["beta"] = r.beta;
  j["overall"] = agg(r.overall);
  j["missing"] = r.missing;
  j["malformed"] = r.malformed;
  j["by_target_kind"] = group(r.by_target_kind);
  j["by_level"] = group(r.by_level);
  j["by_dpi_band"] = group(r.by_dpi_band);
  j["by_split"] = group(r.by_split);
  if (per_target) {
    Json rows = Json::array();
    for (const auto& s : r.scores) {
      const char* status = s.status == ScoreStatus::Ok ? "ok" : s.status == ScoreStatus::Missing ? "missing" : "malformed";
      rows.push_back({{"id", s.id}, {"iou", s.iou}, {"biou", s.biou}, {"status", status}});
    }
    j["targets"] = rows;
  }
  return j;
}

inline std::string format_table(const EvalReport& r) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-14s %-14s %8s %9s %9s\n", "group", "value", "count", "IoU", "BIoU");
  out << buf;
  const auto row = [&](const char* group, const std::string& value, const Aggregate& a) {
    std::snprintf(buf, sizeof buf, "%-14s %-14s %8lld %9.4f %9.4f\n", group, value.c_str(),
                  static_cast<long long>(a.count), a.mean_iou(), a.mean_biou());
    out << buf;
  };
  row("overall", "all", r.overall);
  for (const auto& [k, a] : r.by_target_kind) row("target_kind", k, a);
  for (const auto& [k, a] : r.by_level) row("level", k, a);
  for (const auto& [k, a] : r.by_dpi_band) row("dpi_band", k, a);
  for (const auto& [k, a] : r.by_split) row("split", k, a);
  std::snprintf(buf, sizeof buf, "beta %.2f  missing %lld  malformed %lld\n", r.beta,
                static_cast<long long>(r.missing), static_cast<long long>(r.malformed));
  out << buf;
  return out.str();
}

}  // namespace geomforge
