#pragma once

// Procedural stand-in assets. They let the pipeline, the CLI and the test
// suites run without the external photo and mask corpora.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "bidbench/filter.hpp"
#include "bidbench/image.hpp"
#include "bidbench/png_io.hpp"
#include "bidbench/random.hpp"
#include "bidbench/weather.hpp"

namespace bidbench::fixtures {

namespace fs = std::filesystem;

/// Smooth colored scene: two-tone gradient, sinusoidal texture and a few
/// flat rectangles. `hue` biases the palette so domains are distinguishable.
inline ImageBuffer scene(RandomStream& rng, int w, int h, double hue = -1.0) {
  ImageBuffer img(w, h, 3);
  const double base_hue = hue >= 0.0 ? hue : rng.uniform();
  double c0[3], c1[3];
  for (int c = 0; c < 3; ++c) {
    const double phase = 2.0 * std::numbers::pi * (base_hue + c / 3.0);
    c0[c] = 0.45 + 0.3 * std::cos(phase) + rng.uniform(-0.05, 0.05);
    c1[c] = 0.45 + 0.3 * std::sin(phase) + rng.uniform(-0.05, 0.05);
  }
  const double fx = rng.uniform(1.0, 6.0), fy = rng.uniform(1.0, 6.0), amp = rng.uniform(0.05, 0.15);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double t = static_cast<double>(y) / h;
      const double tex = amp * std::sin(2 * std::numbers::pi * (fx * x / w + fy * y / h));
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = clamp01(c0[c] * (1 - t) + c1[c] * t + tex);
    }
  }
  const auto rects = rng.uniform_int(2, 5);
  for (std::int64_t r = 0; r < rects; ++r) {
    const int x0 = static_cast<int>(rng.uniform_int(0, w - 2)), y0 = static_cast<int>(rng.uniform_int(0, h - 2));
    const int rw = static_cast<int>(rng.uniform_int(1, w / 3 + 1)), rh = static_cast<int>(rng.uniform_int(1, h / 3 + 1));
    double col[3];
    for (double& v : col) v = rng.uniform(0.1, 0.9);
    for (int y = y0; y < std::min(h, y0 + rh); ++y)
      for (int x = x0; x < std::min(w, x0 + rw); ++x)
        for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<float>(col[c]);
  }
  return img;
}

/// Slanted thin streaks of varying intensity.
inline ImageBuffer rain_streak_mask(RandomStream& rng, int w, int h) {
  ImageBuffer m(w, h, 1);
  const double angle = rng.uniform(-0.35, 0.35);
  const auto n = rng.uniform_int(w * h / 400, w * h / 150);
  for (std::int64_t i = 0; i < n; ++i) {
    const double x = rng.uniform(0, w), y = rng.uniform(0, h);
    const double len = rng.uniform(h * 0.05, h * 0.2);
    const double v = rng.uniform(0.3, 0.9);
    for (double s = 0; s < len; s += 0.5) {
      const int px = static_cast<int>(x + s * std::sin(angle));
      const int py = static_cast<int>(y + s * std::cos(angle));
      if (px >= 0 && px < w && py >= 0 && py < h) m.at(px, py) = std::max(m.at(px, py), static_cast<float>(v));
    }
  }
  return gaussian_blur(m, 3);
}

/// Soft flakes of random size.
inline ImageBuffer snow_mask(RandomStream& rng, int w, int h) {
  ImageBuffer m(w, h, 1);
  const auto n = rng.uniform_int(w * h / 300, w * h / 120);
  for (std::int64_t i = 0; i < n; ++i) {
    const double cx = rng.uniform(0, w), cy = rng.uniform(0, h);
    const double r = rng.uniform(0.6, 2.5);
    const double v = rng.uniform(0.5, 1.0);
    for (int y = static_cast<int>(cy - r - 1); y <= static_cast<int>(cy + r + 1); ++y) {
      for (int x = static_cast<int>(cx - r - 1); x <= static_cast<int>(cx + r + 1); ++x) {
        if (x < 0 || x >= w || y < 0 || y >= h) continue;
        const double d = std::hypot(x - cx, y - cy) / r;
        if (d < 1.0) m.at(x, y) = std::max(m.at(x, y), static_cast<float>(v * (1.0 - d * d)));
      }
    }
  }
  return m;
}

/// Transmission map whose mean level depends on the haze intensity.
inline ImageBuffer transmission_map(RandomStream& rng, int w, int h, HazeIntensity level) {
  double lo = 0.0, hi = 0.0;
  switch (level) {
    case HazeIntensity::kLight: lo = 0.75, hi = 0.92; break;
    case HazeIntensity::kModerate: lo = 0.5, hi = 0.68; break;
    case HazeIntensity::kHeavy: lo = 0.22, hi = 0.4; break;
  }
  ImageBuffer t(w, h, 1);
  const double tilt = rng.uniform(-1.0, 1.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double depth = 0.5 + 0.5 * ((static_cast<double>(y) / h) * 0.8 + tilt * 0.2 * x / w);
      t.at(x, y) = clamp01(lo + (hi - lo) * std::clamp(depth, 0.0, 1.0));
    }
  return t;
}

/// Soft-edged elliptical shadow region.
inline ImageBuffer shadow_region(RandomStream& rng, int w, int h) {
  ImageBuffer m(w, h, 1);
  const double cx = rng.uniform(0.25, 0.75) * w, cy = rng.uniform(0.25, 0.75) * h;
  const double rx = rng.uniform(0.15, 0.35) * w, ry = rng.uniform(0.15, 0.35) * h;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double d = std::hypot((x - cx) / rx, (y - cy) / ry);
      m.at(x, y) = d <= 1.0 ? 1.0f : 0.0f;
    }
  return m;
}

inline ImageBuffer cast_shadow(const ImageBuffer& free, const ImageBuffer& mask, double darkness) {
  ImageBuffer out = free;
  const auto soft = gaussian_blur(mask, 5);
  for (int y = 0; y < free.height(); ++y)
    for (int x = 0; x < free.width(); ++x)
      for (int c = 0; c < 3; ++c) {
        const double s = soft.at(x, y);
        out.at(x, y, c) = clamp01(free.at(x, y, c) * (1.0 - s * (1.0 - darkness)));
      }
  return out;
}

struct Watermark {
  ImageBuffer rgb;
  ImageBuffer mask;
};

/// Block-glyph watermark: light RGB strokes plus the binary mask.
inline Watermark watermark(RandomStream& rng, int w, int h) {
  Watermark wm{ImageBuffer(w, h, 3), ImageBuffer(w, h, 1)};
  const int cell = std::max(2, w / 32);
  const int gx = static_cast<int>(rng.uniform_int(0, w / 3)), gy = static_cast<int>(rng.uniform_int(0, h / 2));
  const auto glyphs = rng.uniform_int(3, 7);
  const double level = rng.uniform(0.35, 0.7);
  for (std::int64_t g = 0; g < glyphs; ++g) {
    for (int by = 0; by < 5; ++by)
      for (int bx = 0; bx < 3; ++bx) {
        if (!rng.bernoulli(0.55)) continue;
        for (int y = 0; y < cell; ++y)
          for (int x = 0; x < cell; ++x) {
            const int px = gx + static_cast<int>(g) * 4 * cell + bx * cell + x;
            const int py = gy + by * cell + y;
            if (px >= w || py >= h) continue;
            wm.mask.at(px, py) = 1.0f;
            for (int c = 0; c < 3; ++c) wm.rgb.at(px, py, c) = static_cast<float>(level);
          }
      }
  }
  return wm;
}

/// Write `count` assets of every kind under `root`, plus one run config per
/// task (task1.json, task2a.json, task2b.json, task3.json).
inline void write_fixture_tree(const fs::path& root, int count, int size, std::uint64_t seed,
                               int task1_domains = 4) {
  RandomStream rng(seed);
  auto save = [&root](const ImageBuffer& img, const std::string& rel) { save_image(img, root / rel); };
  auto name = [](int i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d.png", i);
    return std::string(buf);
  };
  for (int d = 0; d < task1_domains; ++d) {
    const double hue = static_cast<double>(d) / task1_domains;
    for (int i = 0; i < count; ++i) save(scene(rng, size, size, hue), "domains/d" + std::to_string(d) + "/" + name(i));
  }
  for (int i = 0; i < count; ++i) {
    save(scene(rng, size, size), "background/" + name(i));
    save(rain_streak_mask(rng, size, size), "rain_streak/" + name(i));
    save(snow_mask(rng, size, size), "snow/" + name(i));
    save(transmission_map(rng, size, size, HazeIntensity::kLight), "haze/light/" + name(i));
    save(transmission_map(rng, size, size, HazeIntensity::kModerate), "haze/moderate/" + name(i));
    save(transmission_map(rng, size, size, HazeIntensity::kHeavy), "haze/heavy/" + name(i));
    const auto free = scene(rng, size, size);
    const auto mask = shadow_region(rng, size, size);
    save(free, "shadow/shadow_free/" + name(i));
    save(mask, "shadow/mask/" + name(i));
    save(cast_shadow(free, mask, rng.uniform(0.35, 0.6)), "shadow/shadow/" + name(i));
    save(scene(rng, size, size), "reflection/" + name(i));
    const auto wm = watermark(rng, size, size);
    save(wm.rgb, "watermark/rgb/" + name(i));
    save(wm.mask, "watermark/mask/" + name(i));
  }

  auto write_config = [&root](const std::string& file, nlohmann::json j) {
    std::ofstream out(root / file, std::ios::trunc);
    if (!out) throw IoError("cannot write " + (root / file).string());
    out << j.dump(2) << '\n';
  };
  nlohmann::json base = {{"mode", "test"}, {"seed", 1}, {"samples", 20}, {"width", size}, {"height", size}};
  auto cfg = base;
  cfg["task"] = "task1";
  cfg["output"] = "out/task1";
  cfg["components"] = nlohmann::json::array();
  for (int d = 0; d < task1_domains; ++d) {
    cfg["components"].push_back({{"name", "domain" + std::to_string(d)}, {"dir", "domains/d" + std::to_string(d)}});
  }
  write_config("task1.json", cfg);
  cfg = base;
  cfg["task"] = "task2a";
  cfg["output"] = "out/task2a";
  cfg["assets"] = {{"background", "background"}, {"rain_streak", "rain_streak"}, {"snow", "snow"}, {"haze", "haze"}};
  write_config("task2a.json", cfg);
  cfg["task"] = "task2b";
  cfg["output"] = "out/task2b";
  cfg["assets"].erase("haze");
  write_config("task2b.json", cfg);
  cfg = base;
  cfg["task"] = "task3";
  cfg["output"] = "out/task3";
  cfg["assets"] = {{"shadow", "shadow"}, {"reflection", "reflection"}, {"watermark", "watermark"}};
  write_config("task3.json", cfg);
}

}  // namespace bidbench::fixtures
