#pragma once

#include <cmath>
#include <vector>

#include "bidbench/error.hpp"
#include "bidbench/image.hpp"
#include "bidbench/random.hpp"

namespace bidbench {

// Sigma used when only a kernel size is known: 0.3*((k-1)/2 - 1) + 0.8.
inline double default_sigma(int kernel_px) noexcept {
  return 0.3 * ((kernel_px - 1) * 0.5 - 1.0) + 0.8;
}

/// Normalized, sampled 1-D Gaussian of odd length.
inline std::vector<double> gaussian_kernel(int kernel_px, double sigma) {
  if (kernel_px < 1 || kernel_px % 2 == 0) {
    throw InvalidArgument("gaussian_kernel: kernel size must be odd and >= 1");
  }
  if (!(sigma > 0.0)) throw InvalidArgument("gaussian_kernel: sigma must be positive");
  const int half = kernel_px / 2;
  std::vector<double> k(static_cast<std::size_t>(kernel_px));
  double sum = 0.0;
  for (int i = -half; i <= half; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + half)] = v;
    sum += v;
  }
  for (auto& v : k) v /= sum;
  return k;
}

/// Separable Gaussian blur with clamp-to-edge borders.
inline ImageBuffer gaussian_blur(const ImageBuffer& img, int kernel_px, double sigma) {
  const auto k = gaussian_kernel(kernel_px, sigma);
  if (kernel_px == 1) return img;
  const int half = kernel_px / 2;
  const int w = img.width(), h = img.height(), ch = img.channels();

  std::vector<double> tmp(img.data().size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int i = -half; i <= half; ++i) acc += k[i + half] * img.clamped(x + i, y, c);
        tmp[(static_cast<std::size_t>(y) * w + x) * ch + c] = acc;
      }
    }
  }
  ImageBuffer out(w, h, ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int i = -half; i <= half; ++i) {
          const int yy = std::clamp(y + i, 0, h - 1);
          acc += k[i + half] * tmp[(static_cast<std::size_t>(yy) * w + x) * ch + c];
        }
        out.at(x, y, c) = clamp01(acc);
      }
    }
  }
  return out;
}

inline ImageBuffer gaussian_blur(const ImageBuffer& img, int kernel_px) {
  return gaussian_blur(img, kernel_px, kernel_px == 1 ? 1.0 : default_sigma(kernel_px));
}

// Bilinear sample at continuous pixel coordinates (pixel centers at integers),
// border-clamped.
inline double sample_bilinear(const ImageBuffer& img, double x, double y, int c) noexcept {
  x = std::clamp(x, 0.0, static_cast<double>(img.width() - 1));
  y = std::clamp(y, 0.0, static_cast<double>(img.height() - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = img.at(x0, y0, c) * (1.0 - fx) + img.at(x1, y0, c) * fx;
  const double bottom = img.at(x0, y1, c) * (1.0 - fx) + img.at(x1, y1, c) * fx;
  return top * (1.0 - fy) + bottom * fy;
}

/// Bilinear resize with half-pixel centers.
inline ImageBuffer resize_bilinear(const ImageBuffer& img, int width, int height) {
  if (width <= 0 || height <= 0) throw InvalidArgument("resize_bilinear: non-positive size");
  if (img.width() == width && img.height() == height) return img;
  ImageBuffer out(width, height, img.channels());
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double src_y = (y + 0.5) * sy - 0.5;
    for (int x = 0; x < width; ++x) {
      const double src_x = (x + 0.5) * sx - 0.5;
      for (int c = 0; c < img.channels(); ++c) {
        out.at(x, y, c) = clamp01(sample_bilinear(img, src_x, src_y, c));
      }
    }
  }
  return out;
}

inline ImageBuffer crop(const ImageBuffer& img, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || width <= 0 || height <= 0 || x0 + width > img.width() ||
      y0 + height > img.height()) {
    throw InvalidArgument("crop: window outside image");
  }
  ImageBuffer out(width, height, img.channels());
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = img.at(x0 + x, y0 + y, c);
  return out;
}

inline ImageBuffer flip_horizontal(const ImageBuffer& img) {
  ImageBuffer out(img.width(), img.height(), img.channels());
  const int w = img.width();
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = img.at(w - 1 - x, y, c);
  return out;
}

// Training-time geometry: load at 286x286, random 256x256 crop, random flip.
struct AugmentSpec {
  int load_size = 286;
  int crop_size = 256;
};

struct AugmentDraw {
  int offset_x = 0;
  int offset_y = 0;
  bool flip = false;
};

inline AugmentDraw draw_augment(RandomStream& rng, const AugmentSpec& spec = {}) {
  const int slack = spec.load_size - spec.crop_size;
  AugmentDraw d;
  d.offset_x = static_cast<int>(rng.uniform_int(0, slack));
  d.offset_y = static_cast<int>(rng.uniform_int(0, slack));
  d.flip = rng.bernoulli(0.5);
  return d;
}

inline ImageBuffer augment(const ImageBuffer& img, const AugmentDraw& draw, const AugmentSpec& spec = {}) {
  auto resized = resize_bilinear(img, spec.load_size, spec.load_size);
  auto out = crop(resized, draw.offset_x, draw.offset_y, spec.crop_size, spec.crop_size);
  return draw.flip ? flip_horizontal(out) : out;
}

inline ImageBuffer augment(const ImageBuffer& img, RandomStream& rng, const AugmentSpec& spec = {}) {
  return augment(img, draw_augment(rng, spec), spec);
}

}  // namespace bidbench
