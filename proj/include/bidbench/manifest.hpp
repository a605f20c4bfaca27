#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bidbench/compose.hpp"
#include "bidbench/error.hpp"
#include "bidbench/scenario.hpp"
#include "bidbench/tasks.hpp"

namespace bidbench {

using nlohmann::json;

/// Per-sample record written as one JSON line. Paths under `files` are
/// relative to the dataset root; `assets` holds the source files exactly as
/// resolved from the run configuration.
struct MixManifest {
  std::string sample_id;
  std::uint64_t sample_index = 0;
  std::uint64_t master_seed = 0;
  Task task = Task::kTask1;
  Mode mode = Mode::kTest;
  int width = 0;
  int height = 0;
  CaseMask mask;
  std::vector<std::string> component_names;  // all N, index order
  std::vector<double> selection_probs;
  MixParams params;
  std::map<std::string, std::string> assets;

  std::string mixed_path;
  std::optional<std::string> clean_path;
  std::optional<std::string> region_path;
  std::map<std::string, std::string> gt_paths;  // component name -> file

  [[nodiscard]] std::vector<std::string> selected_names() const {
    std::vector<std::string> out;
    for (int m : mask.indices()) out.push_back(component_names.at(m - 1));
    return out;
  }
};

inline json raindrop_config_to_json(const RaindropConfig& c) {
  return {{"count_min", c.count_min},
          {"count_max", c.count_max},
          {"radius_min", c.radius_min},
          {"radius_max", c.radius_max},
          {"velocity_k", c.velocity_k},
          {"time_steps", c.time_steps},
          {"gain", c.gain},
          {"field_epsilon", c.field_epsilon},
          {"threshold_lo", c.threshold_lo},
          {"threshold_hi", c.threshold_hi},
          {"satellite_ratio_min", c.satellite_ratio_min},
          {"satellite_ratio_max", c.satellite_ratio_max}};
}

// Missing keys keep the defaults already present in `c`.
inline RaindropConfig raindrop_config_from_json(const json& j, RaindropConfig c = {}) {
  c.count_min = j.value("count_min", c.count_min);
  c.count_max = j.value("count_max", c.count_max);
  c.radius_min = j.value("radius_min", c.radius_min);
  c.radius_max = j.value("radius_max", c.radius_max);
  c.velocity_k = j.value("velocity_k", c.velocity_k);
  c.time_steps = j.value("time_steps", c.time_steps);
  c.gain = j.value("gain", c.gain);
  c.field_epsilon = j.value("field_epsilon", c.field_epsilon);
  c.threshold_lo = j.value("threshold_lo", c.threshold_lo);
  c.threshold_hi = j.value("threshold_hi", c.threshold_hi);
  c.satellite_ratio_min = j.value("satellite_ratio_min", c.satellite_ratio_min);
  c.satellite_ratio_max = j.value("satellite_ratio_max", c.satellite_ratio_max);
  c.validate();
  return c;
}

inline json to_json(const MixManifest& m) {
  json drops = json::array();
  for (const auto& d : m.params.raindrops.drops) {
    json sats = json::array();
    for (const auto& s : d.satellites) sats.push_back({s.x, s.y, s.radius});
    drops.push_back({{"x", d.x}, {"y", d.y}, {"radius", d.radius}, {"velocity_y", d.velocity_y}, {"satellites", sats}});
  }
  json params = {
      {"atmosphere", m.params.atmosphere},
      {"attenuation", m.params.attenuation},
      {"haze_intensity", std::string(to_string(m.params.haze_intensity))},
      {"raindrop_blur_kernel", m.params.raindrop_blur_kernel},
      {"raindrop_blur_sigma", default_sigma(m.params.raindrop_blur_kernel)},
      {"reflection_kernel", m.params.reflection_kernel},
      {"reflection_sigma", default_sigma(m.params.reflection_kernel)},
      {"vignette_strength", m.params.vignette_strength},
      {"raindrop",
       {{"config", raindrop_config_to_json(m.params.raindrop_cfg)},
        {"time_index", m.params.raindrops.time_index},
        {"digest", raindrop_digest(m.params.raindrops.drops)},
        {"drops", drops}}},
  };
  json files = {{"mixed", m.mixed_path}, {"gt", m.gt_paths}};
  if (m.clean_path) files["clean"] = *m.clean_path;
  if (m.region_path) files["region_mask"] = *m.region_path;
  return {
      {"sample_id", m.sample_id},
      {"sample_index", m.sample_index},
      {"master_seed", m.master_seed},
      {"task", std::string(to_string(m.task))},
      {"mode", std::string(to_string(m.mode))},
      {"size", {m.width, m.height}},
      {"components", m.component_names},
      {"selection_probs", m.selection_probs},
      {"case", {{"bits", m.mask.bits()}, {"letters", m.mask.letters()}, {"selected", m.selected_names()}}},
      {"params", params},
      {"assets", m.assets},
      {"files", files},
  };
}

inline MixManifest manifest_from_json(const json& j) {
  try {
    MixManifest m;
    m.sample_id = j.at("sample_id").get<std::string>();
    m.sample_index = j.at("sample_index").get<std::uint64_t>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.task = parse_task(j.at("task").get<std::string>());
    m.mode = parse_mode(j.at("mode").get<std::string>());
    m.width = j.at("size").at(0).get<int>();
    m.height = j.at("size").at(1).get<int>();
    m.component_names = j.at("components").get<std::vector<std::string>>();
    m.selection_probs = j.at("selection_probs").get<std::vector<double>>();
    m.mask = CaseMask(j.at("case").at("bits").get<std::uint32_t>());

    const auto& p = j.at("params");
    m.params.atmosphere = p.at("atmosphere").get<double>();
    m.params.attenuation = p.at("attenuation").get<double>();
    m.params.haze_intensity = parse_haze_intensity(p.at("haze_intensity").get<std::string>());
    m.params.raindrop_blur_kernel = p.at("raindrop_blur_kernel").get<int>();
    m.params.reflection_kernel = p.at("reflection_kernel").get<int>();
    m.params.vignette_strength = p.at("vignette_strength").get<double>();
    const auto& rd = p.at("raindrop");
    m.params.raindrop_cfg = raindrop_config_from_json(rd.at("config"));
    m.params.raindrops.time_index = rd.at("time_index").get<int>();
    for (const auto& d : rd.at("drops")) {
      Raindrop drop;
      drop.x = d.at("x").get<double>();
      drop.y = d.at("y").get<double>();
      drop.radius = d.at("radius").get<double>();
      drop.velocity_y = d.at("velocity_y").get<double>();
      for (const auto& s : d.at("satellites")) {
        drop.satellites.push_back({s.at(0).get<double>(), s.at(1).get<double>(), s.at(2).get<double>()});
      }
      m.params.raindrops.drops.push_back(std::move(drop));
    }
    if (rd.contains("digest") && rd.at("digest").get<std::string>() != raindrop_digest(m.params.raindrops.drops)) {
      throw InvalidArgument("manifest " + m.sample_id + ": raindrop digest does not match drop list");
    }

    m.assets = j.at("assets").get<std::map<std::string, std::string>>();
    const auto& f = j.at("files");
    m.mixed_path = f.at("mixed").get<std::string>();
    if (f.contains("clean")) m.clean_path = f.at("clean").get<std::string>();
    if (f.contains("region_mask")) m.region_path = f.at("region_mask").get<std::string>();
    m.gt_paths = f.at("gt").get<std::map<std::string, std::string>>();
    return m;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed manifest record: ") + e.what());
  }
}

inline std::vector<MixManifest> read_manifests(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  std::vector<MixManifest> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InvalidArgument("manifest " + path.string() + ": " + e.what());
    }
    out.push_back(manifest_from_json(j));
  }
  return out;
}

inline void write_manifests(const std::vector<MixManifest>& manifests, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest: " + path.string());
  for (const auto& m : manifests) out << to_json(m).dump() << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace bidbench
