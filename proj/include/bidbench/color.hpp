#pragma once

#include <array>
#include <cmath>

#include "bidbench/error.hpp"
#include "bidbench/image.hpp"

namespace bidbench {

namespace color_detail {

// D65 reference white, XYZ scaled so Y = 1.
inline constexpr double kWhiteX = 0.95047;
inline constexpr double kWhiteY = 1.0;
inline constexpr double kWhiteZ = 1.08883;

inline constexpr double kEpsilon = 216.0 / 24389.0;
inline constexpr double kKappa = 24389.0 / 27.0;

inline double srgb_to_linear(double c) noexcept {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double linear_to_srgb(double c) noexcept {
  return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

inline double lab_f(double t) noexcept {
  return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

inline double lab_f_inv(double f) noexcept {
  const double f3 = f * f * f;
  return f3 > kEpsilon ? f3 : (116.0 * f - 16.0) / kKappa;
}

}  // namespace color_detail

inline std::array<double, 3> srgb_to_lab(double r, double g, double b) noexcept {
  using namespace color_detail;
  const double rl = srgb_to_linear(r);
  const double gl = srgb_to_linear(g);
  const double bl = srgb_to_linear(b);
  const double x = 0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl;
  const double y = 0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl;
  const double z = 0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl;
  const double fx = lab_f(x / kWhiteX);
  const double fy = lab_f(y / kWhiteY);
  const double fz = lab_f(z / kWhiteZ);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

// Inverse of srgb_to_lab without gamut clamping.
inline std::array<double, 3> lab_to_srgb(double L, double a, double b) noexcept {
  using namespace color_detail;
  const double fy = (L + 16.0) / 116.0;
  const double fx = fy + a / 500.0;
  const double fz = fy - b / 200.0;
  const double x = lab_f_inv(fx) * kWhiteX;
  const double y = (L > kKappa * kEpsilon ? fy * fy * fy : L / kKappa) * kWhiteY;
  const double z = lab_f_inv(fz) * kWhiteZ;
  const double rl = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
  const double gl = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
  const double bl = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
  return {linear_to_srgb(rl), linear_to_srgb(gl), linear_to_srgb(bl)};
}

/// sRGB (D65) -> CIELAB for a 3-channel buffer.
inline LabBuffer srgb_to_lab(const ImageBuffer& img) {
  if (img.channels() != 3) throw InvalidArgument("srgb_to_lab: expected a 3-channel image");
  LabBuffer out{img.width(), img.height(), std::vector<double>(img.pixel_count() * 3)};
  const auto src = img.data();
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    const auto lab = srgb_to_lab(src[3 * p], src[3 * p + 1], src[3 * p + 2]);
    out.data[3 * p] = lab[0];
    out.data[3 * p + 1] = lab[1];
    out.data[3 * p + 2] = lab[2];
  }
  return out;
}

}  // namespace bidbench
