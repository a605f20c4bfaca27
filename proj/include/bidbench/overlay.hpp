#pragma once

#include <cmath>
#include <numbers>
#include <optional>

#include "bidbench/error.hpp"
#include "bidbench/filter.hpp"
#include "bidbench/image.hpp"
#include "bidbench/weather.hpp"

namespace bidbench {

/// Paired shadow data: shadow image, shadow-free image and its mask.
struct ShadowTriplet {
  ImageBuffer shadow_image;
  ImageBuffer shadow_free_image;
  ImageBuffer shadow_mask;
};

struct ReflectionLayer {
  ImageBuffer R;
  int kernel_px = 11;
};

/// RGB watermark intensities plus its binary coverage mask (the target).
struct WatermarkAsset {
  ImageBuffer w;
  ImageBuffer mask;
};

struct ShadowBase {
  ImageBuffer base;
  ImageBuffer gt_mask;
};

inline ShadowBase shadow_base(const ShadowTriplet& triplet, bool shadow_selected) {
  require_same_grid(triplet.shadow_image, triplet.shadow_free_image, "shadow_base");
  require_same_grid(triplet.shadow_image, triplet.shadow_mask, "shadow_base");
  require_single_channel(triplet.shadow_mask, "shadow_base");
  if (shadow_selected) return {triplet.shadow_image, triplet.shadow_mask};
  return {triplet.shadow_free_image,
          ImageBuffer(triplet.shadow_mask.width(), triplet.shadow_mask.height(), 1, 0.0f)};
}

// Reflection kernel: uniform odd size in [3,17] for training, 11 for testing.
inline int sample_reflection_kernel(RandomStream& rng, Mode mode) {
  if (mode == Mode::kTest) return 11;
  return 3 + 2 * static_cast<int>(rng.uniform_int(0, 7));
}

/// Radial vignette: 1 at the center, (1 - strength) at the farthest corner,
/// squared-cosine falloff in between.
inline ImageBuffer vignette_mask(int width, int height, double strength) {
  if (strength < 0.0 || strength > 1.0) throw InvalidArgument("vignette_mask: strength outside [0,1]");
  ImageBuffer out(width, height, 1, 1.0f);
  if (strength == 0.0) return out;
  const double cx = (width - 1) * 0.5;
  const double cy = (height - 1) * 0.5;
  const double rmax = std::hypot(cx, cy);
  if (rmax == 0.0) return out;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double rho = std::hypot(x - cx, y - cy) / rmax;
      const double c = std::cos(0.5 * std::numbers::pi * rho);
      out.at(x, y) = clamp01(1.0 - strength * (1.0 - c * c));
    }
  }
  return out;
}

/// Blurred reflection contribution R*V that the additive model adds to T.
inline ImageBuffer reflection_contribution(const ReflectionLayer& refl, const ImageBuffer& V) {
  require_same_grid(refl.R, V, "apply_reflection");
  require_single_channel(V, "apply_reflection");
  const ImageBuffer blurred = gaussian_blur(refl.R, refl.kernel_px);
  ImageBuffer out(blurred.width(), blurred.height(), blurred.channels());
  const int ch = blurred.channels();
  const auto r = blurred.data();
  const auto v = V.data();
  auto dst = out.data();
  for (std::size_t p = 0; p < blurred.pixel_count(); ++p) {
    for (int c = 0; c < ch; ++c) {
      dst[p * ch + c] = clamp01(static_cast<double>(r[p * ch + c]) * v[p]);
    }
  }
  return out;
}

/// Additive reflection I = clamp(T + blur(R)*V, 0, 1).
inline ImageBuffer apply_reflection(const ImageBuffer& T, const ReflectionLayer& refl, const ImageBuffer& V) {
  require_same_grid(T, refl.R, "apply_reflection");
  const ImageBuffer blurred = gaussian_blur(refl.R, refl.kernel_px);
  require_same_grid(T, V, "apply_reflection");
  require_single_channel(V, "apply_reflection");
  const int ch = T.channels();
  const int rch = blurred.channels();
  if (rch != 1 && rch != ch) throw InvalidArgument("apply_reflection: channel mismatch");
  ImageBuffer out(T.width(), T.height(), ch);
  const auto t = T.data();
  const auto r = blurred.data();
  const auto v = V.data();
  auto dst = out.data();
  for (std::size_t p = 0; p < T.pixel_count(); ++p) {
    for (int c = 0; c < ch; ++c) {
      const double rv = static_cast<double>(r[p * rch + (rch == 1 ? 0 : c)]) * v[p];
      dst[p * ch + c] = clamp01(t[p * ch + c] + rv);
    }
  }
  return out;
}

/// Watermark composition I = J(1-w) + A*w, per channel with RGB w.
inline ImageBuffer apply_watermark(const ImageBuffer& J, const WatermarkAsset& wm, const Atmosphere& A) {
  require_same_grid(J, wm.w, "apply_watermark");
  return detail::blend_toward(J, wm.w, A.A);
}

// Binarize a mask at 0.5.
inline ImageBuffer binarize(const ImageBuffer& m) {
  ImageBuffer g = to_gray(m);
  for (auto& v : g.data()) v = v >= 0.5f ? 1.0f : 0.0f;
  return g;
}

}  // namespace bidbench
