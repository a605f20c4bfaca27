#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "bidbench/compose.hpp"
#include "bidbench/error.hpp"
#include "bidbench/manifest.hpp"
#include "bidbench/png_io.hpp"
#include "bidbench/random.hpp"
#include "bidbench/tasks.hpp"

namespace bidbench {

namespace fs = std::filesystem;

/// Everything run_synth needs. Built from a JSON file, then overridden by
/// command-line flags.
struct RunConfig {
  Task task = Task::kTask2A;
  Mode mode = Mode::kTest;
  std::uint64_t master_seed = 0;
  std::uint64_t samples = 0;
  fs::path output;
  int width = 256;
  int height = 256;
  unsigned threads = 0;  // 0 = hardware concurrency

  // Task I: ordered (name, dir) pairs. Other tasks: named asset roots.
  std::vector<std::pair<std::string, fs::path>> components;
  std::map<std::string, fs::path> assets;

  std::optional<std::vector<double>> probabilities;
  std::optional<std::vector<std::string>> fixed_case;
  std::optional<HazeIntensity> haze_intensity;  // unset = random among available
  ParamDefaults defaults;

  [[nodiscard]] TaskDefinition task_definition() const {
    std::vector<std::string> names;
    for (const auto& [name, dir] : components) names.push_back(name);
    TaskDefinition def = make_task(task, names);
    if (probabilities) override_probabilities(def, *probabilities);
    return def;
  }

  [[nodiscard]] std::optional<CaseMask> fixed_mask(const TaskDefinition& def) const {
    if (!fixed_case) return std::nullopt;
    CaseMask m;
    for (const auto& name : *fixed_case) m.insert(def.index_of(name));
    if (m.empty()) throw InvalidArgument("fixed_case selects no components");
    return m;
  }
};

inline fs::path resolve_against(const fs::path& base, const fs::path& p) {
  return p.is_absolute() || base.empty() ? p : base / p;
}

/// Parse a RunConfig from JSON. Relative paths resolve against `base_dir`.
inline RunConfig run_config_from_json(const nlohmann::json& j, const fs::path& base_dir = {}) {
  RunConfig c;
  try {
    c.task = parse_task(j.at("task").get<std::string>());
    c.mode = parse_mode(j.value("mode", std::string("test")));
    c.master_seed = j.value("seed", std::uint64_t{0});
    c.samples = j.value("samples", std::uint64_t{0});
    if (j.contains("output")) c.output = resolve_against(base_dir, j.at("output").get<std::string>());
    c.width = j.value("width", c.width);
    c.height = j.value("height", c.height);
    c.threads = j.value("threads", 0u);
    if (j.contains("components")) {
      for (const auto& e : j.at("components")) {
        c.components.emplace_back(e.at("name").get<std::string>(),
                                  resolve_against(base_dir, e.at("dir").get<std::string>()));
      }
    }
    if (j.contains("assets")) {
      for (const auto& [k, v] : j.at("assets").items()) {
        c.assets[k] = resolve_against(base_dir, v.get<std::string>());
      }
    }
    if (j.contains("probabilities")) c.probabilities = j.at("probabilities").get<std::vector<double>>();
    if (j.contains("fixed_case")) c.fixed_case = j.at("fixed_case").get<std::vector<std::string>>();
    if (j.contains("haze_intensity")) {
      const auto s = j.at("haze_intensity").get<std::string>();
      if (s != "random") c.haze_intensity = parse_haze_intensity(s);
    }
    if (j.contains("atmosphere_range")) {
      c.defaults.atmosphere.lo = j.at("atmosphere_range").at(0).get<double>();
      c.defaults.atmosphere.hi = j.at("atmosphere_range").at(1).get<double>();
    }
    c.defaults.vignette_strength = j.value("vignette_strength", c.defaults.vignette_strength);
    if (j.contains("raindrop")) c.defaults.raindrop = raindrop_config_from_json(j.at("raindrop"));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("invalid run config: ") + e.what());
  }
  if (c.width < 11 || c.height < 11) throw InvalidArgument("run config: width/height must be >= 11");
  return c;
}

inline RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument("config " + path.string() + ": " + e.what());
  }
  return run_config_from_json(j, fs::absolute(path).parent_path().lexically_normal());
}

/// Sorted PNG listing of a directory.
inline std::vector<fs::path> list_pngs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw AssetError("asset directory not found: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (ext == ".png") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw AssetError("asset directory has no PNG files: " + dir.string());
  return out;
}

/// File listings for every asset source of a run, collected once up front.
struct AssetCatalog {
  std::map<std::string, std::vector<fs::path>> lists;
  std::vector<HazeIntensity> haze_levels;  // available haze subfolders

  [[nodiscard]] const std::vector<fs::path>& at(const std::string& key) const {
    auto it = lists.find(key);
    if (it == lists.end()) throw AssetError("no assets configured for '" + key + "'");
    return it->second;
  }
};

namespace synth_detail {

inline const fs::path& asset_root(const RunConfig& cfg, const std::string& key) {
  auto it = cfg.assets.find(key);
  if (it == cfg.assets.end()) throw AssetError("run config lacks asset directory '" + key + "'");
  return it->second;
}

inline std::string haze_key(HazeIntensity h) { return "haze/" + std::string(to_string(h)); }

}  // namespace synth_detail

inline AssetCatalog build_catalog(const RunConfig& cfg, const TaskDefinition& def) {
  using synth_detail::asset_root;
  AssetCatalog cat;
  switch (cfg.task) {
    case Task::kTask1:
      for (const auto& [name, dir] : cfg.components) cat.lists[name] = list_pngs(dir);
      break;
    case Task::kTask2A:
    case Task::kTask2B: {
      cat.lists["background"] = list_pngs(asset_root(cfg, "background"));
      cat.lists["rain_streak"] = list_pngs(asset_root(cfg, "rain_streak"));
      cat.lists["snow"] = list_pngs(asset_root(cfg, "snow"));
      if (def.index_of(ComponentKind::kHaze) != 0) {
        const auto& root = asset_root(cfg, "haze");
        for (auto h : {HazeIntensity::kLight, HazeIntensity::kModerate, HazeIntensity::kHeavy}) {
          const auto dir = root / std::string(to_string(h));
          if (fs::is_directory(dir)) {
            cat.lists[synth_detail::haze_key(h)] = list_pngs(dir);
            cat.haze_levels.push_back(h);
          }
        }
        if (cat.haze_levels.empty()) {
          throw AssetError("haze directory needs light/, moderate/ or heavy/ subfolders: " + root.string());
        }
        if (cfg.haze_intensity &&
            std::find(cat.haze_levels.begin(), cat.haze_levels.end(), *cfg.haze_intensity) == cat.haze_levels.end()) {
          throw AssetError("requested haze intensity has no asset folder: " +
                           std::string(to_string(*cfg.haze_intensity)));
        }
      }
      break;
    }
    case Task::kTask3: {
      const auto& shadow = asset_root(cfg, "shadow");
      cat.lists["shadow/shadow"] = list_pngs(shadow / "shadow");
      cat.lists["shadow/shadow_free"] = list_pngs(shadow / "shadow_free");
      cat.lists["shadow/mask"] = list_pngs(shadow / "mask");
      const auto n = cat.lists["shadow/shadow"].size();
      for (const char* k : {"shadow/shadow_free", "shadow/mask"}) {
        const auto& l = cat.lists[k];
        if (l.size() != n) throw AssetError("shadow folders have different file counts");
        for (std::size_t i = 0; i < n; ++i) {
          if (l[i].filename() != cat.lists["shadow/shadow"][i].filename()) {
            throw AssetError("shadow folders are not paired by filename: " + l[i].filename().string());
          }
        }
      }
      cat.lists["reflection"] = list_pngs(asset_root(cfg, "reflection"));
      const auto& wm = asset_root(cfg, "watermark");
      cat.lists["watermark/rgb"] = list_pngs(wm / "rgb");
      cat.lists["watermark/mask"] = list_pngs(wm / "mask");
      if (cat.lists["watermark/rgb"].size() != cat.lists["watermark/mask"].size()) {
        throw AssetError("watermark rgb/ and mask/ have different file counts");
      }
      break;
    }
  }
  return cat;
}

/// Choose one file per asset source. All draws happen for every sample so the
/// asset lane does not depend on the case.
inline std::map<std::string, std::string> choose_assets(const RunConfig& cfg, const TaskDefinition& def,
                                                        const AssetCatalog& cat, RandomStream& rng,
                                                        HazeIntensity& haze) {
  std::map<std::string, std::string> chosen;
  auto pick = [&rng](const std::vector<fs::path>& l) -> std::size_t {
    return static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(l.size()) - 1));
  };
  switch (cfg.task) {
    case Task::kTask1:
      for (const auto& c : def.components) chosen[c.name] = cat.at(c.name)[pick(cat.at(c.name))].generic_string();
      break;
    case Task::kTask2A:
    case Task::kTask2B: {
      for (const char* k : {"background", "rain_streak", "snow"}) chosen[k] = cat.at(k)[pick(cat.at(k))].generic_string();
      if (!cat.haze_levels.empty()) {
        const auto level_draw = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(cat.haze_levels.size()) - 1));
        haze = cfg.haze_intensity.value_or(cat.haze_levels[level_draw]);
        const auto& l = cat.at(synth_detail::haze_key(haze));
        chosen["haze"] = l[pick(l)].generic_string();
      }
      break;
    }
    case Task::kTask3: {
      const auto i = pick(cat.at("shadow/shadow"));
      chosen["shadow_image"] = cat.at("shadow/shadow")[i].generic_string();
      chosen["shadow_free"] = cat.at("shadow/shadow_free")[i].generic_string();
      chosen["shadow_mask"] = cat.at("shadow/mask")[i].generic_string();
      chosen["reflection"] = cat.at("reflection")[pick(cat.at("reflection"))].generic_string();
      const auto w = pick(cat.at("watermark/rgb"));
      chosen["watermark"] = cat.at("watermark/rgb")[w].generic_string();
      chosen["watermark_mask"] = cat.at("watermark/mask")[w].generic_string();
      break;
    }
  }
  return chosen;
}

namespace synth_detail {

inline ImageBuffer load_rgb(const std::string& path, int w, int h) {
  return resize_bilinear(to_rgb(load_image(path)), w, h);
}

inline ImageBuffer load_gray(const std::string& path, int w, int h) {
  return resize_bilinear(to_gray(load_image(path)), w, h);
}

inline const std::string& chosen(const std::map<std::string, std::string>& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw AssetError("manifest lacks asset '" + key + "'");
  return it->second;
}

}  // namespace synth_detail

/// Decode and grid-align the assets a case needs.
inline SampleAssets load_assets(const TaskDefinition& def, CaseMask mask,
                                const std::map<std::string, std::string>& chosen, int w, int h) {
  using synth_detail::load_gray;
  using synth_detail::load_rgb;
  SampleAssets a;
  auto get = [&chosen](const std::string& k) -> const std::string& { return synth_detail::chosen(chosen, k); };
  switch (def.task) {
    case Task::kTask1:
      for (int m : mask.indices()) a.layers[m] = load_rgb(get(def.component(m).name), w, h);
      break;
    case Task::kTask2A:
    case Task::kTask2B:
      a.background = load_rgb(get("background"), w, h);
      for (int m : mask.indices()) {
        const auto& c = def.component(m);
        if (c.kind != ComponentKind::kRaindrop) a.layers[m] = load_gray(get(c.name), w, h);
      }
      break;
    case Task::kTask3: {
      a.shadow = ShadowTriplet{load_rgb(get("shadow_image"), w, h), load_rgb(get("shadow_free"), w, h),
                               load_gray(get("shadow_mask"), w, h)};
      const int refl = def.index_of(ComponentKind::kReflection);
      if (mask.contains(refl)) a.layers[refl] = load_rgb(get("reflection"), w, h);
      if (mask.contains(def.index_of(ComponentKind::kWatermark))) {
        a.watermark = WatermarkAsset{load_rgb(get("watermark"), w, h), load_gray(get("watermark_mask"), w, h)};
      }
      break;
    }
  }
  return a;
}

inline std::string format_sample_id(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06llu", static_cast<unsigned long long>(index));
  return buf;
}

struct SampleOutput {
  MixManifest manifest;
  ComposeResult result;
};

/// Generate one sample from (config, sample index). Touches only this
/// sample's derived streams.
inline SampleOutput generate_sample(const RunConfig& cfg, const TaskDefinition& def, const AssetCatalog& cat,
                                    std::uint64_t index) {
  auto case_rng = derive_stream(cfg.master_seed, index, Lane::kCase);
  auto asset_rng = derive_stream(cfg.master_seed, index, Lane::kAssets);
  auto param_rng = derive_stream(cfg.master_seed, index, Lane::kParams);
  auto drop_rng = derive_stream(cfg.master_seed, index, Lane::kRaindrops);

  const CaseMask mask = cfg.fixed_mask(def).value_or(sample_case(def.policy, case_rng));
  HazeIntensity haze = cfg.haze_intensity.value_or(HazeIntensity::kModerate);
  auto chosen = choose_assets(cfg, def, cat, asset_rng, haze);
  MixParams params = sample_params(def, mask, cfg.mode, cfg.width, cfg.height, param_rng, drop_rng, cfg.defaults);
  params.haze_intensity = haze;

  SampleOutput out;
  out.result = compose(def, mask, load_assets(def, mask, chosen, cfg.width, cfg.height), params);

  auto& m = out.manifest;
  m.sample_id = format_sample_id(index);
  m.sample_index = index;
  m.master_seed = cfg.master_seed;
  m.task = cfg.task;
  m.mode = cfg.mode;
  m.width = cfg.width;
  m.height = cfg.height;
  m.mask = mask;
  for (const auto& c : def.components) m.component_names.push_back(c.name);
  m.selection_probs = def.policy.probs();
  m.params = std::move(params);
  m.assets = std::move(chosen);
  m.mixed_path = "mixed/" + m.sample_id + ".png";
  for (const auto& gt : out.result.gts) m.gt_paths[gt.name] = "gt/" + m.sample_id + "." + gt.name + ".png";
  if (out.result.clean) m.clean_path = "gt/" + m.sample_id + "." + std::string(kCleanName) + ".png";
  if (out.result.region_mask) m.region_path = "gt/" + m.sample_id + "." + std::string(kRegionName) + ".png";
  return out;
}

/// Recompose a sample from its manifest alone (asset files + recorded
/// parameters), without any random draws.
inline ComposeResult regenerate_sample(const MixManifest& m) {
  std::vector<std::string> names = m.task == Task::kTask1 ? m.component_names : std::vector<std::string>{};
  TaskDefinition def = make_task(m.task, names);
  override_probabilities(def, m.selection_probs);
  return compose(def, m.mask, load_assets(def, m.mask, m.assets, m.width, m.height), m.params);
}

inline void write_sample(const fs::path& root, const SampleOutput& s) {
  const auto& m = s.manifest;
  save_image(s.result.mixed, root / m.mixed_path);
  for (const auto& gt : s.result.gts) save_image(gt.image, root / m.gt_paths.at(gt.name));
  if (s.result.clean) save_image(*s.result.clean, root / *m.clean_path);
  if (s.result.region_mask) save_image(*s.result.region_mask, root / *m.region_path);
}

/// Worker count: the requested number (0 = hardware), capped by
/// BIDBENCH_THREADS when set.
inline unsigned resolve_workers(unsigned requested) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BIDBENCH_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

/// Run `fn(i)` for i in [0, count) on `workers` threads. The first exception
/// stops further work and is rethrown.
template <typename Fn>
void parallel_for(std::uint64_t count, unsigned workers, Fn&& fn) {
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const auto i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(count, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct SynthSummary {
  std::uint64_t samples = 0;
  std::map<std::uint32_t, std::uint64_t> case_counts;
  fs::path manifest_path;
};

/// Write mixed inputs, ground truths and manifest.jsonl under cfg.output.
inline SynthSummary run_synth(const RunConfig& cfg) {
  if (cfg.output.empty()) throw InvalidArgument("run_synth: no output directory");
  const TaskDefinition def = cfg.task_definition();
  const AssetCatalog cat = build_catalog(cfg, def);
  std::error_code ec;
  fs::create_directories(cfg.output / "mixed", ec);
  fs::create_directories(cfg.output / "gt", ec);
  if (ec) throw IoError("cannot create output directory " + cfg.output.string() + ": " + ec.message());

  std::vector<MixManifest> manifests(cfg.samples);
  parallel_for(cfg.samples, resolve_workers(cfg.threads), [&](std::uint64_t i) {
    auto s = generate_sample(cfg, def, cat, i);
    write_sample(cfg.output, s);
    manifests[i] = std::move(s.manifest);
  });

  SynthSummary summary;
  summary.samples = cfg.samples;
  summary.manifest_path = cfg.output / "manifest.jsonl";
  for (const auto& m : manifests) ++summary.case_counts[m.mask.bits()];
  write_manifests(manifests, summary.manifest_path);
  return summary;
}

}  // namespace bidbench
