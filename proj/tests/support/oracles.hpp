#pragma once

// Test-only reference implementations. Each one is written directly from the
// defining formula with plain loops and shares no code path with the library
// function it checks (beyond the ImageBuffer container).

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "bidbench/image.hpp"
#include "bidbench/random.hpp"

namespace oracle {

using bidbench::ImageBuffer;

inline ImageBuffer random_image(bidbench::RandomStream& rng, int w, int h, int ch) {
  ImageBuffer img(w, h, ch);
  for (auto& v : img.data()) v = static_cast<float>(rng.uniform());
  return img;
}

inline ImageBuffer constant(int w, int h, int ch, float v) { return ImageBuffer(w, h, ch, v); }

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// z = (1/L) sum x
inline ImageBuffer mean_mix(const std::vector<ImageBuffer>& xs) {
  ImageBuffer out(xs[0].width(), xs[0].height(), xs[0].channels());
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x)
      for (int c = 0; c < out.channels(); ++c) {
        double s = 0;
        for (const auto& img : xs) s += img.at(x, y, c);
        out.at(x, y, c) = static_cast<float>(s / xs.size());
      }
  return out;
}

// I = J(1-m) + A m, m broadcast when single-channel.
inline ImageBuffer mask_composite(const ImageBuffer& J, const ImageBuffer& m, double A) {
  ImageBuffer out(J.width(), J.height(), J.channels());
  for (int y = 0; y < J.height(); ++y)
    for (int x = 0; x < J.width(); ++x)
      for (int c = 0; c < J.channels(); ++c) {
        const double mv = m.at(x, y, m.channels() == 1 ? 0 : c);
        out.at(x, y, c) = static_cast<float>(clamp01(J.at(x, y, c) * (1 - mv) + A * mv));
      }
  return out;
}

// I = J t + A (1 - t)
inline ImageBuffer haze(const ImageBuffer& J, const ImageBuffer& t, double A) {
  ImageBuffer out(J.width(), J.height(), J.channels());
  for (int y = 0; y < J.height(); ++y)
    for (int x = 0; x < J.width(); ++x)
      for (int c = 0; c < J.channels(); ++c) {
        const double tv = t.at(x, y);
        out.at(x, y, c) = static_cast<float>(clamp01(J.at(x, y, c) * tv + A * (1 - tv)));
      }
  return out;
}

// Dense 2-D convolution with the outer product of a sampled Gaussian,
// clamp-to-edge borders.
inline ImageBuffer dense_gaussian(const ImageBuffer& img, int k, double sigma) {
  const int half = k / 2;
  std::vector<double> w1(k);
  double s = 0;
  for (int i = 0; i < k; ++i) {
    w1[i] = std::exp(-((i - half) * (i - half)) / (2 * sigma * sigma));
    s += w1[i];
  }
  ImageBuffer out(img.width(), img.height(), img.channels());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < img.channels(); ++c) {
        double acc = 0;
        for (int j = 0; j < k; ++j)
          for (int i = 0; i < k; ++i) {
            acc += w1[i] * w1[j] / (s * s) * img.clamped(x + i - half, y + j - half, c);
          }
        out.at(x, y, c) = static_cast<float>(clamp01(acc));
      }
  return out;
}

// I = clamp(T + blurred_R * V)
inline ImageBuffer reflection(const ImageBuffer& T, const ImageBuffer& blurred_R, const ImageBuffer& V) {
  ImageBuffer out(T.width(), T.height(), T.channels());
  for (int y = 0; y < T.height(); ++y)
    for (int x = 0; x < T.width(); ++x)
      for (int c = 0; c < T.channels(); ++c) {
        out.at(x, y, c) = static_cast<float>(clamp01(T.at(x, y, c) + double(blurred_R.at(x, y, c)) * V.at(x, y)));
      }
  return out;
}

// I = (1-c) O + c D
inline ImageBuffer blend(const ImageBuffer& O, const ImageBuffer& D, const ImageBuffer& cov) {
  ImageBuffer out(O.width(), O.height(), O.channels());
  for (int y = 0; y < O.height(); ++y)
    for (int x = 0; x < O.width(); ++x)
      for (int c = 0; c < O.channels(); ++c) {
        const double a = cov.at(x, y);
        out.at(x, y, c) = static_cast<float>(clamp01((1 - a) * O.at(x, y, c) + a * D.at(x, y, c)));
      }
  return out;
}

inline double bilinear(const ImageBuffer& img, double x, double y, int c) {
  x = std::fmin(std::fmax(x, 0.0), img.width() - 1.0);
  y = std::fmin(std::fmax(y, 0.0), img.height() - 1.0);
  const int x0 = static_cast<int>(x), y0 = static_cast<int>(y);
  const int x1 = x0 + 1 < img.width() ? x0 + 1 : x0;
  const int y1 = y0 + 1 < img.height() ? y0 + 1 : y0;
  const double ax = x - x0, ay = y - y0;
  return (1 - ax) * (1 - ay) * img.at(x0, y0, c) + ax * (1 - ay) * img.at(x1, y0, c) +
         (1 - ax) * ay * img.at(x0, y1, c) + ax * ay * img.at(x1, y1, c);
}

// Warp with x = u + gain*(R-0.5)*B, y = v + gain*(G-0.5)*B where covered.
inline ImageBuffer warp(const ImageBuffer& O, const ImageBuffer& R, const ImageBuffer& G, const ImageBuffer& B,
                        const ImageBuffer& cov, double gain) {
  ImageBuffer out = O;
  for (int v = 0; v < O.height(); ++v)
    for (int u = 0; u < O.width(); ++u) {
      if (cov.at(u, v) <= 0) continue;
      const double sx = u + gain * (R.at(u, v) - 0.5) * B.at(u, v);
      const double sy = v + gain * (G.at(u, v) - 0.5) * B.at(u, v);
      for (int c = 0; c < O.channels(); ++c) out.at(u, v, c) = static_cast<float>(clamp01(bilinear(O, sx, sy, c)));
    }
  return out;
}

// Dense SSIM: for every valid 11x11 window, weighted moments from scratch.
inline double ssim_dense(const ImageBuffer& a, const ImageBuffer& b) {
  auto luma = [](const ImageBuffer& img, int x, int y) {
    if (img.channels() == 1) return static_cast<double>(img.at(x, y));
    return static_cast<double>(
        static_cast<float>(0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2)));
  };
  const int win = 11;
  const double sigma = 1.5;
  double w[win][win], s = 0;
  for (int j = 0; j < win; ++j)
    for (int i = 0; i < win; ++i) {
      w[j][i] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / (2 * sigma * sigma));
      s += w[j][i];
    }
  const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
  double total = 0;
  int n = 0;
  for (int y = 0; y + win <= a.height(); ++y)
    for (int x = 0; x + win <= a.width(); ++x) {
      double mx = 0, my = 0;
      for (int j = 0; j < win; ++j)
        for (int i = 0; i < win; ++i) {
          mx += w[j][i] / s * luma(a, x + i, y + j);
          my += w[j][i] / s * luma(b, x + i, y + j);
        }
      double vx = 0, vy = 0, cov = 0;
      for (int j = 0; j < win; ++j)
        for (int i = 0; i < win; ++i) {
          const double da = luma(a, x + i, y + j) - mx, db = luma(b, x + i, y + j) - my;
          vx += w[j][i] / s * da * da;
          vy += w[j][i] / s * db * db;
          cov += w[j][i] / s * da * db;
        }
      total += (2 * mx * my + c1) * (2 * cov + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++n;
    }
  return total / n;
}

// CIELAB -> sRGB via the textbook inverse (D65, Bruce Lindbloom matrices).
inline std::array<double, 3> lab_to_srgb(double L, double a, double b) {
  const double fy = (L + 16) / 116, fx = fy + a / 500, fz = fy - b / 200;
  auto finv = [](double f) { return f * f * f > 0.008856451679035631 ? f * f * f : (116 * f - 16) / 903.2962962962963; };
  const double X = 0.95047 * finv(fx);
  const double Y = L > 8.0 ? fy * fy * fy : L / 903.2962962962963;
  const double Z = 1.08883 * finv(fz);
  const double lin[3] = {3.2404542 * X - 1.5371385 * Y - 0.4985314 * Z, -0.9692660 * X + 1.8760108 * Y + 0.0415560 * Z,
                         0.0556434 * X - 0.2040259 * Y + 1.0572252 * Z};
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = lin[i] <= 0.0031308 ? 12.92 * lin[i] : 1.055 * std::pow(lin[i], 1 / 2.4) - 0.055;
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// FNV-1a over relative paths and contents of every regular file, sorted.
inline std::uint64_t tree_hash(const std::filesystem::path& root) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root))
    if (e.is_regular_file()) files.push_back(std::filesystem::relative(e.path(), root));
  std::sort(files.begin(), files.end());
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001B3ULL;
    }
  };
  for (const auto& f : files) {
    feed(f.generic_string());
    feed(read_file(root / f));
  }
  return h;
}

}  // namespace oracle
