#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "bidbench/error.hpp"
#include "bidbench/image.hpp"
#include "bidbench/mode.hpp"
#include "bidbench/random.hpp"

namespace bidbench {

enum class MaskKind { kRainStreak, kSnow };

/// Single-channel occlusion mask m in [0,1], broadcast over RGB.
struct MaskLayer {
  ImageBuffer mask;
  MaskKind kind = MaskKind::kRainStreak;
};

enum class HazeIntensity { kLight, kModerate, kHeavy };

inline std::string_view to_string(HazeIntensity h) noexcept {
  switch (h) {
    case HazeIntensity::kLight: return "light";
    case HazeIntensity::kModerate: return "moderate";
    case HazeIntensity::kHeavy: return "heavy";
  }
  return "moderate";
}

inline HazeIntensity parse_haze_intensity(std::string_view s) {
  if (s == "light") return HazeIntensity::kLight;
  if (s == "moderate") return HazeIntensity::kModerate;
  if (s == "heavy") return HazeIntensity::kHeavy;
  throw InvalidArgument("unknown haze intensity: " + std::string(s));
}

/// Single-channel transmission map t in [0,1].
struct TransmissionMap {
  ImageBuffer t;
  HazeIntensity intensity = HazeIntensity::kModerate;
};

/// Global atmospheric light.
struct Atmosphere {
  double A = 0.9;
};

struct AtmosphereRange {
  double lo = 0.8;
  double hi = 1.0;
  double test_value = 0.9;
};

inline Atmosphere sample_atmosphere(RandomStream& rng, Mode mode, const AtmosphereRange& range = {}) {
  if (range.lo > range.hi) throw InvalidArgument("sample_atmosphere: empty range");
  if (mode == Mode::kTest) return {range.test_value};
  if (range.lo == range.hi) return {range.lo};
  return {rng.uniform(range.lo, range.hi)};
}

namespace detail {

// out = J*(1-w) + A*w. w is either single-channel (broadcast) or matches J.
inline ImageBuffer blend_toward(const ImageBuffer& J, const ImageBuffer& w, double A) {
  const int ch = J.channels();
  const int wch = w.channels();
  if (wch != 1 && wch != ch) throw InvalidArgument("blend_toward: weight channel mismatch");
  ImageBuffer out(J.width(), J.height(), ch);
  const auto src = J.data();
  const auto wv = w.data();
  auto dst = out.data();
  const double a = static_cast<float>(A);
  for (std::size_t p = 0; p < J.pixel_count(); ++p) {
    for (int c = 0; c < ch; ++c) {
      const double m = wv[p * wch + (wch == 1 ? 0 : c)];
      const double j = src[p * ch + c];
      dst[p * ch + c] = clamp01(j * (1.0 - m) + a * m);
    }
  }
  return out;
}

}  // namespace detail

/// Rain streak / snow model: I = J(1-m) + A*m.
inline ImageBuffer apply_mask_composite(const ImageBuffer& J, const MaskLayer& m, const Atmosphere& A) {
  require_same_grid(J, m.mask, "apply_mask_composite");
  require_single_channel(m.mask, "apply_mask_composite");
  return detail::blend_toward(J, m.mask, A.A);
}

/// Koschmieder haze: I = J*t + A(1-t).
inline ImageBuffer apply_haze(const ImageBuffer& J, const TransmissionMap& t, const Atmosphere& A) {
  require_same_grid(J, t.t, "apply_haze");
  require_single_channel(t.t, "apply_haze");
  const int ch = J.channels();
  ImageBuffer out(J.width(), J.height(), ch);
  const auto src = J.data();
  const auto tv = t.t.data();
  auto dst = out.data();
  const double a = static_cast<float>(A.A);
  for (std::size_t p = 0; p < J.pixel_count(); ++p) {
    const double tr = tv[p];
    for (int c = 0; c < ch; ++c) {
      dst[p * ch + c] = clamp01(src[p * ch + c] * tr + a * (1.0 - tr));
    }
  }
  return out;
}

}  // namespace bidbench
