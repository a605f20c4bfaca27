#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "bidbench/error.hpp"
#include "bidbench/filter.hpp"
#include "bidbench/image.hpp"
#include "bidbench/mode.hpp"
#include "bidbench/random.hpp"

namespace bidbench {

/// One metaball: center and radius in pixels.
struct Ball {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;

  friend bool operator==(const Ball&, const Ball&) = default;
};

/// A composite raindrop: a parent ball plus 1-3 smaller satellites. Satellite
/// positions are offsets from the parent center so the whole drop moves as one.
struct Raindrop {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;
  double velocity_y = 0.0;
  std::vector<Ball> satellites;  // x/y are offsets from (x, y)

  [[nodiscard]] std::vector<Ball> balls() const {
    std::vector<Ball> out;
    out.reserve(satellites.size() + 1);
    out.push_back({x, y, radius});
    for (const auto& s : satellites) out.push_back({x + s.x, y + s.y, s.radius});
    return out;
  }

  friend bool operator==(const Raindrop&, const Raindrop&) = default;
};

struct RaindropConfig {
  int count_min = 5;
  int count_max = 25;
  double radius_min = 4.0;
  double radius_max = 24.0;
  double velocity_k = 0.5;  // px per time step, per px of radius
  int time_steps = 8;
  double gain = 30.0;  // displacement gain in px for a drop of radius_max
  double field_epsilon = 1e-3;
  double threshold_lo = 0.8;
  double threshold_hi = 1.2;
  double satellite_ratio_min = 0.3;
  double satellite_ratio_max = 0.7;

  // Radii and gain are given for a 256x256 grid.
  [[nodiscard]] RaindropConfig scaled_to(int width, int height) const {
    RaindropConfig c = *this;
    const double s = std::min(width, height) / 256.0;
    c.radius_min *= s;
    c.radius_max *= s;
    c.gain *= s;
    return c;
  }

  void validate() const {
    if (count_min < 0 || count_max < count_min) throw InvalidArgument("raindrop: bad count range");
    if (!(radius_min > 0.0) || radius_max < radius_min) throw InvalidArgument("raindrop: bad radius range");
    if (time_steps < 1) throw InvalidArgument("raindrop: time_steps must be >= 1");
    if (!(field_epsilon > 0.0)) throw InvalidArgument("raindrop: field epsilon must be positive");
    if (!(threshold_lo < threshold_hi)) throw InvalidArgument("raindrop: bad threshold band");
    if (!(satellite_ratio_min > 0.0) || satellite_ratio_max >= 1.0 ||
        satellite_ratio_max < satellite_ratio_min) {
      throw InvalidArgument("raindrop: satellite ratio must lie in (0,1)");
    }
  }
};

struct RaindropSample {
  std::vector<Raindrop> drops;
  int time_index = 0;
};

/// Place drops uniformly over the grid, attach satellites, then advance every
/// drop along +y by velocity_y * tau for one uniformly chosen time index tau.
inline RaindropSample sample_raindrops(RandomStream& rng, const RaindropConfig& cfg, int width, int height) {
  cfg.validate();
  RaindropSample out;
  const auto count = rng.uniform_int(cfg.count_min, cfg.count_max);
  out.drops.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    Raindrop d;
    d.x = rng.uniform(0.0, width);
    d.y = rng.uniform(0.0, height);
    d.radius = rng.uniform(cfg.radius_min, cfg.radius_max);
    d.velocity_y = cfg.velocity_k * d.radius;
    const auto n_sat = rng.uniform_int(1, 3);
    for (std::int64_t s = 0; s < n_sat; ++s) {
      const double ratio = rng.uniform(cfg.satellite_ratio_min, cfg.satellite_ratio_max);
      const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double dist = d.radius * rng.uniform(0.5, 1.0);
      d.satellites.push_back({dist * std::cos(angle), dist * std::sin(angle), d.radius * ratio});
    }
    out.drops.push_back(std::move(d));
  }
  out.time_index = static_cast<int>(rng.uniform_int(0, cfg.time_steps - 1));
  for (auto& d : out.drops) d.y += d.velocity_y * out.time_index;
  return out;
}

inline std::vector<Ball> flatten_balls(const std::vector<Raindrop>& drops) {
  std::vector<Ball> balls;
  for (const auto& d : drops) {
    const auto b = d.balls();
    balls.insert(balls.end(), b.begin(), b.end());
  }
  return balls;
}

inline double smoothstep(double lo, double hi, double v) noexcept {
  const double t = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

/// Inverse-square metaball field F(p) = sum r^2 / (|p - c|^2 + eps).
inline double metaball_field(const std::vector<Ball>& balls, double px, double py, double eps) noexcept {
  double f = 0.0;
  for (const auto& b : balls) {
    const double dx = px - b.x;
    const double dy = py - b.y;
    f += b.radius * b.radius / (dx * dx + dy * dy + eps);
  }
  return f;
}

/// Coverage alpha: smoothstep of the field over the threshold band.
inline ImageBuffer metaball_coverage(const std::vector<Raindrop>& drops, int width, int height,
                                     const RaindropConfig& cfg = {}) {
  ImageBuffer out(width, height, 1);
  const auto balls = flatten_balls(drops);
  if (balls.empty()) return out;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double f = metaball_field(balls, x, y, cfg.field_epsilon);
      out.at(x, y) = clamp01(smoothstep(cfg.threshold_lo, cfg.threshold_hi, f));
    }
  }
  return out;
}

/// Per-pixel lookup table masked by coverage. R/G: surface-normal deflection
/// mapped to [0,1] with 0.5 = none; B: spherical-cap thickness; scale:
/// dominant drop radius relative to the configured maximum (1 when unknown).
struct RefractionTable {
  ImageBuffer r;
  ImageBuffer g;
  ImageBuffer b;
  ImageBuffer coverage;
  ImageBuffer scale;

  [[nodiscard]] int width() const noexcept { return coverage.width(); }
  [[nodiscard]] int height() const noexcept { return coverage.height(); }

  // All channels zero, scale one.
  static RefractionTable blank(int width, int height) {
    return {ImageBuffer(width, height, 1), ImageBuffer(width, height, 1), ImageBuffer(width, height, 1),
            ImageBuffer(width, height, 1), ImageBuffer(width, height, 1, 1.0f)};
  }
};

inline RefractionTable build_refraction_table(const std::vector<Raindrop>& drops, const ImageBuffer& coverage,
                                              const RaindropConfig& cfg = {}, double radius_ref = 0.0) {
  require_single_channel(coverage, "build_refraction_table");
  const int w = coverage.width();
  const int h = coverage.height();
  RefractionTable t = RefractionTable::blank(w, h);
  t.coverage = coverage;
  const auto balls = flatten_balls(drops);
  if (balls.empty()) return t;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double c = coverage.at(x, y);
      if (c <= 0.0) continue;
      // Dominant ball: largest individual field contribution.
      const Ball* dom = &balls.front();
      double best = -1.0;
      for (const auto& ball : balls) {
        const double dx = x - ball.x;
        const double dy = y - ball.y;
        const double f = ball.radius * ball.radius / (dx * dx + dy * dy + cfg.field_epsilon);
        if (f > best) {
          best = f;
          dom = &ball;
        }
      }
      const double dx = x - dom->x;
      const double dy = y - dom->y;
      const double rr = dom->radius;
      const double thickness = std::sqrt(std::max(0.0, rr * rr - (dx * dx + dy * dy))) / rr;
      t.r.at(x, y) = clamp01(0.5 + 0.5 * std::clamp(dx / rr, -1.0, 1.0));
      t.g.at(x, y) = clamp01(0.5 + 0.5 * std::clamp(dy / rr, -1.0, 1.0));
      t.b.at(x, y) = clamp01(thickness * c);
      t.scale.at(x, y) = radius_ref > 0.0 ? clamp01(rr / radius_ref) : 1.0f;
    }
  }
  return t;
}

// Displacement (dx, dy) the table prescribes at (u, v) for a given gain.
struct Displacement {
  double dx = 0.0;
  double dy = 0.0;
};

inline Displacement table_displacement(const RefractionTable& M, int u, int v, double gain) noexcept {
  const double k = gain * M.scale.at(u, v) * M.b.at(u, v);
  return {k * (M.r.at(u, v) - 0.5), k * (M.g.at(u, v) - 0.5)};
}

/// Refraction warp: pixel (u,v) shows O at (u + gain*(R-0.5)*B, v + gain*(G-0.5)*B).
inline ImageBuffer distort(const ImageBuffer& O, const RefractionTable& M, double gain) {
  require_same_grid(O, M.coverage, "distort");
  ImageBuffer out = O;
  for (int v = 0; v < O.height(); ++v) {
    for (int u = 0; u < O.width(); ++u) {
      if (M.coverage.at(u, v) <= 0.0f) continue;
      const auto d = table_displacement(M, u, v, gain);
      for (int c = 0; c < O.channels(); ++c) {
        out.at(u, v, c) = clamp01(sample_bilinear(O, u + d.dx, v + d.dy, c));
      }
    }
  }
  return out;
}

/// Light reduction D = rD over covered pixels, then a 3x3 Gaussian blur.
inline ImageBuffer attenuate_and_blur(const ImageBuffer& D, double rate, const ImageBuffer& coverage,
                                      int kernel_px = 3) {
  if (!(rate > 0.0) || rate > 1.0) throw InvalidArgument("attenuate_and_blur: rate must lie in (0,1]");
  require_same_grid(D, coverage, "attenuate_and_blur");
  require_single_channel(coverage, "attenuate_and_blur");
  ImageBuffer dimmed = D;
  const int ch = D.channels();
  auto dst = dimmed.data();
  const auto cov = coverage.data();
  for (std::size_t p = 0; p < D.pixel_count(); ++p) {
    if (cov[p] <= 0.0f) continue;
    for (int c = 0; c < ch; ++c) dst[p * ch + c] = clamp01(rate * dst[p * ch + c]);
  }
  return gaussian_blur(dimmed, kernel_px);
}

/// I = (1-c) O + c D.
inline ImageBuffer merge_raindrop(const ImageBuffer& O, const ImageBuffer& D, const ImageBuffer& coverage) {
  if (!O.same_shape(D)) throw InvalidArgument("merge_raindrop: size mismatch");
  require_same_grid(O, coverage, "merge_raindrop");
  require_single_channel(coverage, "merge_raindrop");
  ImageBuffer out(O.width(), O.height(), O.channels());
  const int ch = O.channels();
  const auto o = O.data();
  const auto d = D.data();
  const auto cov = coverage.data();
  auto dst = out.data();
  for (std::size_t p = 0; p < O.pixel_count(); ++p) {
    const double c = cov[p];
    for (int k = 0; k < ch; ++k) {
      const std::size_t i = p * ch + k;
      dst[i] = clamp01((1.0 - c) * o[i] + c * d[i]);
    }
  }
  return out;
}

struct RaindropRender {
  ImageBuffer image;
  ImageBuffer coverage;
};

/// Coverage, table, warp, attenuation + blur, merge.
inline RaindropRender render_raindrops(const ImageBuffer& O, const std::vector<Raindrop>& drops,
                                       const RaindropConfig& cfg, double rate) {
  auto coverage = metaball_coverage(drops, O.width(), O.height(), cfg);
  const auto table = build_refraction_table(drops, coverage, cfg, cfg.radius_max);
  const auto warped = distort(O, table, cfg.gain);
  const auto dimmed = attenuate_and_blur(warped, rate, coverage);
  return {merge_raindrop(O, dimmed, coverage), std::move(coverage)};
}

// Attenuation rate: uniform in [0.8, 0.98] for training, 0.9 for testing.
inline double sample_attenuation(RandomStream& rng, Mode mode) {
  return mode == Mode::kTest ? 0.9 : rng.uniform(0.8, 0.98);
}

/// FNV-1a over the bit patterns of the drop geometry, as 16 hex digits.
inline std::string raindrop_digest(const std::vector<Raindrop>& drops) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto feed = [&h](double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xFF;
      h *= 0x100000001B3ULL;
    }
  };
  for (const auto& d : drops) {
    feed(d.x);
    feed(d.y);
    feed(d.radius);
    feed(d.velocity_y);
    for (const auto& s : d.satellites) {
      feed(s.x);
      feed(s.y);
      feed(s.radius);
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bidbench
