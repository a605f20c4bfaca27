#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "bidbench/color.hpp"
#include "bidbench/error.hpp"
#include "bidbench/filter.hpp"
#include "bidbench/image.hpp"
#include "bidbench/scenario.hpp"

namespace bidbench {

/// PSNR with peak 1.0. Identical images give +infinity.
inline double psnr(const ImageBuffer& a, const ImageBuffer& b) {
  if (!a.same_shape(b)) throw InvalidArgument("psnr: size mismatch");
  const auto x = a.data();
  const auto y = b.data();
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = static_cast<double>(x[i]) - y[i];
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(x.size());
  return 10.0 * std::log10(1.0 / mse);
}

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

/// Mean single-scale SSIM over all fully-contained 11x11 Gaussian windows,
/// computed on BT.601 luma for RGB input.
inline double ssim(const ImageBuffer& a, const ImageBuffer& b, const SsimParams& prm = {}) {
  if (!a.same_shape(b)) throw InvalidArgument("ssim: size mismatch");
  if (a.width() < prm.window || a.height() < prm.window) {
    throw InvalidArgument("ssim: image smaller than the 11x11 window");
  }
  const ImageBuffer ga = to_gray(a);
  const ImageBuffer gb = to_gray(b);
  const auto k = gaussian_kernel(prm.window, prm.sigma);
  const int w = ga.width(), h = ga.height(), win = prm.window;
  const int ow = w - win + 1, oh = h - win + 1;
  const double c1 = (prm.k1 * prm.dynamic_range) * (prm.k1 * prm.dynamic_range);
  const double c2 = (prm.k2 * prm.dynamic_range) * (prm.k2 * prm.dynamic_range);

  // Horizontal pass of the five moment images, restricted to valid columns.
  const std::size_t hsize = static_cast<std::size_t>(ow) * h;
  std::vector<double> hx(hsize), hy(hsize), hxx(hsize), hyy(hsize), hxy(hsize);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
      for (int i = 0; i < win; ++i) {
        const double va = ga.at(x + i, y);
        const double vb = gb.at(x + i, y);
        sx += k[i] * va;
        sy += k[i] * vb;
        sxx += k[i] * va * va;
        syy += k[i] * vb * vb;
        sxy += k[i] * va * vb;
      }
      const std::size_t o = static_cast<std::size_t>(y) * ow + x;
      hx[o] = sx;
      hy[o] = sy;
      hxx[o] = sxx;
      hyy[o] = syy;
      hxy[o] = sxy;
    }
  }
  double total = 0.0;
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
      for (int i = 0; i < win; ++i) {
        const std::size_t o = static_cast<std::size_t>(y + i) * ow + x;
        mx += k[i] * hx[o];
        my += k[i] * hy[o];
        mxx += k[i] * hxx[o];
        myy += k[i] * hyy[o];
        mxy += k[i] * hxy[o];
      }
      const double vx = mxx - mx * mx;
      const double vy = myy - my * my;
      const double cov = mxy - mx * my;
      total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
  }
  return total / (static_cast<double>(ow) * oh);
}

/// LAB-space RMSE split by a binary region mask. Regions with no pixels are
/// reported as std::nullopt.
struct LabRmse {
  std::optional<double> shadow;
  std::optional<double> non_shadow;
  double all = 0.0;
};

/// RMS of the per-pixel Euclidean LAB distance over each region.
inline LabRmse rmse_lab(const ImageBuffer& a, const ImageBuffer& b, const ImageBuffer* region = nullptr) {
  if (!a.same_shape(b)) throw InvalidArgument("rmse_lab: size mismatch");
  if (region != nullptr) {
    require_same_grid(a, *region, "rmse_lab");
    require_single_channel(*region, "rmse_lab");
  }
  const auto la = srgb_to_lab(to_rgb(a));
  const auto lb = srgb_to_lab(to_rgb(b));
  double s_in = 0, s_out = 0;
  std::size_t n_in = 0, n_out = 0;
  for (std::size_t p = 0; p < la.pixel_count(); ++p) {
    const double dl = la.L(p) - lb.L(p);
    const double da = la.a(p) - lb.a(p);
    const double db = la.b(p) - lb.b(p);
    const double d2 = dl * dl + da * da + db * db;
    if (region != nullptr && region->data()[p] >= 0.5f) {
      s_in += d2;
      ++n_in;
    } else {
      s_out += d2;
      ++n_out;
    }
  }
  LabRmse out;
  out.all = std::sqrt((s_in + s_out) / static_cast<double>(la.pixel_count()));
  if (region != nullptr) {
    if (n_in > 0) out.shadow = std::sqrt(s_in / static_cast<double>(n_in));
    if (n_out > 0) out.non_shadow = std::sqrt(s_out / static_cast<double>(n_out));
  }
  return out;
}

/// Component logits for one input; a component is predicted present when its
/// logit is strictly positive.
struct PredictionVector {
  std::vector<double> logits;

  [[nodiscard]] CaseMask predicted() const {
    CaseMask m;
    for (std::size_t i = 0; i < logits.size(); ++i)
      if (logits[i] > 0.0) m.insert(static_cast<int>(i) + 1);
    return m;
  }
};

/// Exact-set accuracy: the thresholded logits must reproduce the whole mask.
inline double prediction_accuracy(const std::vector<PredictionVector>& preds, const std::vector<CaseMask>& truths) {
  if (preds.size() != truths.size()) throw InvalidArgument("prediction_accuracy: length mismatch");
  if (preds.empty()) throw InvalidArgument("prediction_accuracy: no samples");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i)
    if (preds[i].predicted() == truths[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(preds.size());
}

/// Neumaier-compensated mean that tolerates +infinity samples (PSNR of
/// identical images): any infinite sample makes the mean infinite.
class MeanAccumulator {
 public:
  void add(double v) noexcept {
    ++count_;
    if (std::isinf(v)) {
      ++inf_count_;
      return;
    }
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  [[nodiscard]] std::size_t count() const noexcept { return count_; }
  [[nodiscard]] double mean() const noexcept {
    if (count_ == 0) return std::numeric_limits<double>::quiet_NaN();
    if (inf_count_ > 0) return std::numeric_limits<double>::infinity();
    return (sum_ + comp_) / static_cast<double>(count_);
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  std::size_t count_ = 0;
  std::size_t inf_count_ = 0;
};

}  // namespace bidbench
