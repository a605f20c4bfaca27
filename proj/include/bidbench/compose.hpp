#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bidbench/error.hpp"
#include "bidbench/filter.hpp"
#include "bidbench/image.hpp"
#include "bidbench/linmix.hpp"
#include "bidbench/mode.hpp"
#include "bidbench/overlay.hpp"
#include "bidbench/raindrop.hpp"
#include "bidbench/random.hpp"
#include "bidbench/scenario.hpp"
#include "bidbench/tasks.hpp"
#include "bidbench/weather.hpp"

namespace bidbench {

/// Decoded, grid-aligned inputs for one sample.
struct SampleAssets {
  std::optional<ImageBuffer> background;  // Task II scene radiance
  std::optional<ShadowTriplet> shadow;    // Task III scene
  std::optional<WatermarkAsset> watermark;
  std::map<int, ImageBuffer> layers;  // component index -> image / mask / t / reflection
};

/// Every sampled scalar needed to render a sample. Together with the chosen
/// asset files this regenerates the mixed image exactly.
struct MixParams {
  double atmosphere = 0.9;
  double attenuation = 0.9;
  HazeIntensity haze_intensity = HazeIntensity::kModerate;
  int raindrop_blur_kernel = 3;
  int reflection_kernel = 11;
  double vignette_strength = 0.4;
  RaindropConfig raindrop_cfg;  // already scaled to the grid
  RaindropSample raindrops;
};

struct GroundTruth {
  int index = 0;
  std::string name;
  ImageBuffer image;
};

struct ComposeResult {
  ImageBuffer mixed;
  std::optional<ImageBuffer> clean;
  std::optional<ImageBuffer> region_mask;
  std::vector<GroundTruth> gts;  // in component index order
};

struct ParamDefaults {
  AtmosphereRange atmosphere;
  double vignette_strength = 0.4;
  RaindropConfig raindrop;
};

/// Draw the per-sample scalars. Every draw happens regardless of the case so
/// that the parameter lane is stable across cases.
inline MixParams sample_params(const TaskDefinition& def, CaseMask mask, Mode mode, int width, int height,
                               RandomStream& params_rng, RandomStream& drop_rng,
                               const ParamDefaults& defaults = {}) {
  MixParams p;
  p.atmosphere = sample_atmosphere(params_rng, mode, defaults.atmosphere).A;
  p.attenuation = sample_attenuation(params_rng, mode);
  p.reflection_kernel = sample_reflection_kernel(params_rng, mode);
  p.vignette_strength = defaults.vignette_strength;
  p.raindrop_cfg = defaults.raindrop.scaled_to(width, height);
  const int drop_index = def.index_of(ComponentKind::kRaindrop);
  if (drop_index != 0 && mask.contains(drop_index)) {
    p.raindrops = sample_raindrops(drop_rng, p.raindrop_cfg, width, height);
  }
  return p;
}

namespace detail {

inline const ImageBuffer& layer(const SampleAssets& assets, int index, const std::string& name) {
  auto it = assets.layers.find(index);
  if (it == assets.layers.end()) throw AssetError("compose: missing asset for component '" + name + "'");
  return it->second;
}

}  // namespace detail

/// Apply the task's mixing functions to the selected components in the
/// policy's mixing order.
inline ComposeResult compose(const TaskDefinition& def, CaseMask mask, const SampleAssets& assets,
                             const MixParams& params) {
  if (mask.empty()) throw InvalidArgument("compose: empty case");
  if ((mask.bits() >> def.size()) != 0) throw InvalidArgument("compose: case selects unknown components");
  const auto& order = def.policy.mixing_order();
  CaseMask covered;
  for (int m : order) covered.insert(m);
  if ((mask.bits() & ~covered.bits()) != 0) {
    throw InvalidArgument("compose: mixing order does not cover the selected components");
  }

  ComposeResult out;
  auto record = [&](int m, ImageBuffer gt) { out.gts.push_back({m, def.component(m).name, std::move(gt)}); };
  const Atmosphere A{params.atmosphere};

  switch (def.task) {
    case Task::kTask1: {
      std::vector<ImageBuffer> selected;
      for (int m : order) {
        if (!mask.contains(m)) continue;
        const auto& img = detail::layer(assets, m, def.component(m).name);
        selected.push_back(img);
        record(m, img);
      }
      out.mixed = linear_mix(selected);
      break;
    }
    case Task::kTask2A:
    case Task::kTask2B: {
      if (!assets.background) throw AssetError("compose: missing background image");
      ImageBuffer J = *assets.background;
      out.clean = J;
      for (int m : order) {
        if (!mask.contains(m)) continue;
        const auto& spec = def.component(m);
        switch (spec.kind) {
          case ComponentKind::kRainStreak:
          case ComponentKind::kSnow: {
            const auto& mk = detail::layer(assets, m, spec.name);
            J = apply_mask_composite(
                J, {mk, spec.kind == ComponentKind::kSnow ? MaskKind::kSnow : MaskKind::kRainStreak}, A);
            record(m, mk);
            break;
          }
          case ComponentKind::kHaze: {
            const auto& t = detail::layer(assets, m, spec.name);
            J = apply_haze(J, {t, params.haze_intensity}, A);
            record(m, t);
            break;
          }
          case ComponentKind::kRaindrop: {
            auto cov = metaball_coverage(params.raindrops.drops, J.width(), J.height(), params.raindrop_cfg);
            const auto table = build_refraction_table(params.raindrops.drops, cov, params.raindrop_cfg,
                                                      params.raindrop_cfg.radius_max);
            const auto warped = distort(J, table, params.raindrop_cfg.gain);
            const auto dimmed = attenuate_and_blur(warped, params.attenuation, cov, params.raindrop_blur_kernel);
            J = merge_raindrop(J, dimmed, cov);
            record(m, std::move(cov));
            break;
          }
          default:
            throw InvalidArgument("compose: component kind not valid for this task");
        }
      }
      out.mixed = std::move(J);
      break;
    }
    case Task::kTask3: {
      const int shadow = def.index_of(ComponentKind::kShadow);
      const int reflection = def.index_of(ComponentKind::kReflection);
      const int watermark = def.index_of(ComponentKind::kWatermark);
      if (order != std::vector<int>{shadow, reflection, watermark}) {
        throw InvalidArgument("compose: task3 requires the order shadow -> reflection -> watermark");
      }
      if (!assets.shadow) throw AssetError("compose: missing shadow triplet");
      auto base = shadow_base(*assets.shadow, mask.contains(shadow));
      out.clean = assets.shadow->shadow_free_image;
      out.region_mask = binarize(assets.shadow->shadow_mask);
      ImageBuffer J = std::move(base.base);
      if (mask.contains(shadow)) record(shadow, binarize(base.gt_mask));
      if (mask.contains(reflection)) {
        const auto& R = detail::layer(assets, reflection, "reflection");
        const ReflectionLayer layer{R, params.reflection_kernel};
        const auto V = vignette_mask(J.width(), J.height(), params.vignette_strength);
        J = apply_reflection(J, layer, V);
        record(reflection, reflection_contribution(layer, V));
      }
      if (mask.contains(watermark)) {
        if (!assets.watermark) throw AssetError("compose: missing watermark asset");
        J = apply_watermark(J, *assets.watermark, A);
        record(watermark, binarize(assets.watermark->mask));
      }
      out.mixed = std::move(J);
      break;
    }
  }
  std::sort(out.gts.begin(), out.gts.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  return out;
}

}  // namespace bidbench
