#pragma once

#include <span>
#include <vector>

#include "bidbench/error.hpp"
#include "bidbench/image.hpp"

namespace bidbench {

/// Per-pixel arithmetic mean of equally sized images (the Task I mixture).
///
/// Sums are accumulated in double. For 8-bit derived inputs every partial sum
/// is exact, so the result does not depend on list order.
inline ImageBuffer linear_mix(std::span<const ImageBuffer> images) {
  if (images.empty()) throw InvalidArgument("linear_mix: empty image list");
  const auto& first = images.front();
  for (const auto& img : images) {
    if (!img.same_shape(first)) throw InvalidArgument("linear_mix: dimension mismatch");
  }
  if (images.size() == 1) return first;

  const std::size_t n = first.data().size();
  std::vector<double> acc(n, 0.0);
  for (const auto& img : images) {
    const auto src = img.data();
    for (std::size_t i = 0; i < n; ++i) acc[i] += src[i];
  }
  ImageBuffer out(first.width(), first.height(), first.channels());
  auto dst = out.data();
  const double count = static_cast<double>(images.size());
  for (std::size_t i = 0; i < n; ++i) dst[i] = clamp01(acc[i] / count);
  return out;
}

inline ImageBuffer linear_mix(const std::vector<ImageBuffer>& images) {
  return linear_mix(std::span<const ImageBuffer>(images));
}

}  // namespace bidbench
