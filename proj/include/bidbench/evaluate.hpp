#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bidbench/error.hpp"
#include "bidbench/manifest.hpp"
#include "bidbench/metrics.hpp"
#include "bidbench/png_io.hpp"
#include "bidbench/synth.hpp"

namespace bidbench {

struct TargetScores {
  MeanAccumulator psnr;
  MeanAccumulator ssim;
  MeanAccumulator rmse_shadow;
  MeanAccumulator rmse_non_shadow;
  MeanAccumulator rmse_all;
};

struct TargetSummary {
  std::size_t count = 0;
  double psnr = 0.0;
  double ssim = 0.0;
  std::optional<double> rmse_shadow;
  std::optional<double> rmse_non_shadow;
  std::optional<double> rmse_all;

  friend bool operator==(const TargetSummary&, const TargetSummary&) = default;
};

struct CaseSummary {
  CaseMask mask;
  std::string letters;
  std::vector<std::string> components;
  std::size_t samples = 0;
  std::map<std::string, TargetSummary> targets;  // method outputs vs ground truth
  std::optional<TargetSummary> input;            // mixed input vs clean target
  std::optional<double> accuracy;

  friend bool operator==(const CaseSummary&, const CaseSummary&) = default;
};

/// Per-case and overall means, ordered by (popcount, mask value).
struct MetricReport {
  std::string task;
  std::size_t samples = 0;
  std::vector<CaseSummary> cases;
  CaseSummary overall;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

namespace eval_detail {

inline nlohmann::json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

inline double number_from(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw InvalidArgument("report: bad number '" + s + "'");
  }
  return j.get<double>();
}

inline TargetSummary summarize(const TargetScores& s) {
  TargetSummary t;
  t.count = s.psnr.count();
  t.psnr = s.psnr.mean();
  t.ssim = s.ssim.mean();
  if (s.rmse_all.count() > 0) t.rmse_all = s.rmse_all.mean();
  if (s.rmse_shadow.count() > 0) t.rmse_shadow = s.rmse_shadow.mean();
  if (s.rmse_non_shadow.count() > 0) t.rmse_non_shadow = s.rmse_non_shadow.mean();
  return t;
}

inline nlohmann::json to_json(const TargetSummary& t) {
  nlohmann::json j = {{"count", t.count}, {"psnr", number(t.psnr)}, {"ssim", number(t.ssim)}};
  if (t.rmse_all) {
    j["rmse"] = {{"all", number(*t.rmse_all)}};
    if (t.rmse_shadow) j["rmse"]["shadow"] = number(*t.rmse_shadow);
    if (t.rmse_non_shadow) j["rmse"]["non_shadow"] = number(*t.rmse_non_shadow);
  }
  return j;
}

inline TargetSummary target_from_json(const nlohmann::json& j) {
  TargetSummary t;
  t.count = j.at("count").get<std::size_t>();
  t.psnr = number_from(j.at("psnr"));
  t.ssim = number_from(j.at("ssim"));
  if (j.contains("rmse")) {
    const auto& r = j.at("rmse");
    t.rmse_all = number_from(r.at("all"));
    if (r.contains("shadow")) t.rmse_shadow = number_from(r.at("shadow"));
    if (r.contains("non_shadow")) t.rmse_non_shadow = number_from(r.at("non_shadow"));
  }
  return t;
}

inline nlohmann::json to_json(const CaseSummary& c) {
  nlohmann::json targets = nlohmann::json::object();
  for (const auto& [name, t] : c.targets) targets[name] = to_json(t);
  nlohmann::json j = {{"case", c.letters},   {"bits", c.mask.bits()}, {"components", c.components},
                      {"samples", c.samples}, {"targets", targets}};
  if (c.input) j["input"] = to_json(*c.input);
  if (c.accuracy) j["accuracy"] = number(*c.accuracy);
  return j;
}

inline CaseSummary case_from_json(const nlohmann::json& j) {
  CaseSummary c;
  c.letters = j.at("case").get<std::string>();
  c.mask = CaseMask(j.at("bits").get<std::uint32_t>());
  c.components = j.at("components").get<std::vector<std::string>>();
  c.samples = j.at("samples").get<std::size_t>();
  for (const auto& [name, t] : j.at("targets").items()) c.targets[name] = target_from_json(t);
  if (j.contains("input")) c.input = target_from_json(j.at("input"));
  if (j.contains("accuracy")) c.accuracy = number_from(j.at("accuracy"));
  return c;
}

// Match channel layout of a method output to its ground truth.
inline ImageBuffer conform(const ImageBuffer& out, const ImageBuffer& gt) {
  if (out.channels() == gt.channels()) return out;
  return gt.channels() == 1 ? to_gray(out) : to_rgb(out);
}

}  // namespace eval_detail

inline nlohmann::json to_json(const MetricReport& r) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : r.cases) cases.push_back(eval_detail::to_json(c));
  return {{"task", r.task}, {"samples", r.samples}, {"cases", cases}, {"overall", eval_detail::to_json(r.overall)}};
}

inline MetricReport report_from_json(const nlohmann::json& j) {
  try {
    MetricReport r;
    r.task = j.at("task").get<std::string>();
    r.samples = j.at("samples").get<std::size_t>();
    for (const auto& c : j.at("cases")) r.cases.push_back(eval_detail::case_from_json(c));
    r.overall = eval_detail::case_from_json(j.at("overall"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed report: ") + e.what());
  }
}

/// Logit vectors keyed by sample id, one JSON object per line:
/// {"sample_id": "000042", "logits": [1.3, -0.2, ...]}.
inline std::map<std::string, PredictionVector> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open predictions: " + path.string());
  std::map<std::string, PredictionVector> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out[j.at("sample_id").get<std::string>()] = {j.at("logits").get<std::vector<double>>()};
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("predictions " + path.string() + ": " + e.what());
    }
  }
  return out;
}

inline constexpr const char* kPredictionsFile = "predictions.jsonl";

/// Score method outputs against a synthesized dataset.
///
/// Outputs are `<outputs_dir>/<sample_id>.<target>.png` for every scored
/// target: each selected component except the reflection layer, plus `clean`
/// for tasks that have a clean scene. Predictions are read from
/// `<outputs_dir>/predictions.jsonl` when that file exists.
inline MetricReport eval_run(const std::vector<MixManifest>& manifests, const std::filesystem::path& dataset_root,
                             const std::filesystem::path& outputs_dir) {
  namespace fs = std::filesystem;
  std::vector<const MixManifest*> order;
  for (const auto& m : manifests) order.push_back(&m);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->sample_id < b->sample_id; });

  std::optional<std::map<std::string, PredictionVector>> preds;
  if (fs::exists(outputs_dir / kPredictionsFile)) preds = read_predictions(outputs_dir / kPredictionsFile);

  struct CaseAcc {
    std::vector<std::string> components;
    std::size_t samples = 0;
    std::map<std::string, TargetScores> targets;
    TargetScores input;
    bool has_input = false;
    std::size_t pred_total = 0;
    std::size_t pred_correct = 0;
  };
  std::map<std::uint32_t, CaseAcc> per_case;
  CaseAcc overall;

  auto load_output = [&](const MixManifest& m, const std::string& target) {
    const auto path = outputs_dir / (m.sample_id + "." + target + ".png");
    if (!fs::exists(path)) throw IoError("sample " + m.sample_id + ": missing output " + path.string());
    return load_image(path);
  };
  auto score = [](TargetScores& s, const ImageBuffer& out, const ImageBuffer& gt, const ImageBuffer* region,
                  bool lab) {
    if (!out.same_grid(gt)) throw InvalidArgument("output/ground-truth dimension mismatch");
    const auto o = eval_detail::conform(out, gt);
    s.psnr.add(psnr(o, gt));
    s.ssim.add(ssim(o, gt));
    if (lab) {
      const auto r = rmse_lab(o, gt, region);
      s.rmse_all.add(r.all);
      if (r.shadow) s.rmse_shadow.add(*r.shadow);
      if (r.non_shadow) s.rmse_non_shadow.add(*r.non_shadow);
    }
  };

  std::string task;
  for (const MixManifest* mp : order) {
    const auto& m = *mp;
    task = std::string(to_string(m.task));
    auto& acc = per_case[m.mask.bits()];
    acc.components = m.selected_names();
    const bool lab = m.task == Task::kTask3;
    std::optional<ImageBuffer> region;
    if (m.region_path) region = load_image(dataset_root / *m.region_path);
    const ImageBuffer* region_ptr = region ? &*region : nullptr;

    for (CaseAcc* a : {&acc, &overall}) ++a->samples;
    for (const auto& [name, rel] : m.gt_paths) {
      if (name == "reflection") continue;  // no reconstruction target
      const auto gt = load_image(dataset_root / rel);
      const auto out = load_output(m, name);
      score(acc.targets[name], out, gt, nullptr, false);
      score(overall.targets[name], out, gt, nullptr, false);
    }
    if (m.clean_path) {
      const auto clean = load_image(dataset_root / *m.clean_path);
      const auto out = load_output(m, std::string(kCleanName));
      const std::string key(kCleanName);
      score(acc.targets[key], out, clean, region_ptr, lab);
      score(overall.targets[key], out, clean, region_ptr, lab);
      const auto mixed = load_image(dataset_root / m.mixed_path);
      score(acc.input, mixed, clean, region_ptr, lab);
      score(overall.input, mixed, clean, region_ptr, lab);
      acc.has_input = overall.has_input = true;
    }
    if (preds) {
      auto it = preds->find(m.sample_id);
      if (it == preds->end()) throw IoError("sample " + m.sample_id + ": missing prediction line");
      const bool ok = it->second.predicted() == m.mask;
      for (CaseAcc* a : {&acc, &overall}) {
        ++a->pred_total;
        a->pred_correct += ok ? 1 : 0;
      }
    }
  }

  auto finish = [&preds](const CaseAcc& a, CaseMask mask) {
    CaseSummary c;
    c.mask = mask;
    c.letters = mask.letters();
    c.components = a.components;
    c.samples = a.samples;
    for (const auto& [name, s] : a.targets) c.targets[name] = eval_detail::summarize(s);
    if (a.has_input) c.input = eval_detail::summarize(a.input);
    if (preds && a.pred_total > 0) c.accuracy = static_cast<double>(a.pred_correct) / a.pred_total;
    return c;
  };

  MetricReport report;
  report.task = task;
  report.samples = order.size();
  std::vector<CaseMask> keys;
  for (const auto& [bits, a] : per_case) keys.emplace_back(bits);
  std::sort(keys.begin(), keys.end(), CaseOrder{});
  for (auto k : keys) report.cases.push_back(finish(per_case.at(k.bits()), k));
  report.overall = finish(overall, CaseMask{});
  report.overall.letters = "all";
  report.overall.components.clear();
  return report;
}

inline void write_report(const MetricReport& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write report: " + path.string());
  out << to_json(r).dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace bidbench
