#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bidbench/error.hpp"

namespace bidbench {

/// Row-major H x W x C raster of samples in [0,1]. Channels is 1 or 3.
///
/// Every raster in the pipeline (source images, masks, transmission maps,
/// vignettes, coverage fields) is carried by this type.
class ImageBuffer {
 public:
  ImageBuffer() = default;

  ImageBuffer(int width, int height, int channels, float fill = 0.0f)
      : width_(width), height_(height), channels_(channels) {
    check_shape(width, height, channels);
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
  }

  ImageBuffer(int width, int height, int channels, std::vector<float> data)
      : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    check_shape(width, height, channels);
    if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
      throw InvalidArgument("ImageBuffer: data length does not match width*height*channels");
    }
  }

  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] int channels() const noexcept { return channels_; }
  [[nodiscard]] std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * height_;
  }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  [[nodiscard]] std::span<float> data() noexcept { return data_; }
  [[nodiscard]] std::span<const float> data() const noexcept { return data_; }

  [[nodiscard]] float& at(int x, int y, int c = 0) noexcept {
    return data_[index(x, y, c)];
  }
  [[nodiscard]] float at(int x, int y, int c = 0) const noexcept {
    return data_[index(x, y, c)];
  }

  // Border-clamped read.
  [[nodiscard]] float clamped(int x, int y, int c = 0) const noexcept {
    x = std::clamp(x, 0, width_ - 1);
    y = std::clamp(y, 0, height_ - 1);
    return data_[index(x, y, c)];
  }

  [[nodiscard]] bool same_grid(const ImageBuffer& o) const noexcept {
    return width_ == o.width_ && height_ == o.height_;
  }
  [[nodiscard]] bool same_shape(const ImageBuffer& o) const noexcept {
    return same_grid(o) && channels_ == o.channels_;
  }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  static void check_shape(int width, int height, int channels) {
    if (width <= 0 || height <= 0) throw InvalidArgument("ImageBuffer: non-positive size");
    if (channels != 1 && channels != 3) throw InvalidArgument("ImageBuffer: channels must be 1 or 3");
  }

  [[nodiscard]] std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

/// CIELAB raster: L in [0,100], a/b unbounded. Interleaved L,a,b per pixel.
struct LabBuffer {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  [[nodiscard]] std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width) * height;
  }
  [[nodiscard]] double L(std::size_t p) const noexcept { return data[3 * p]; }
  [[nodiscard]] double a(std::size_t p) const noexcept { return data[3 * p + 1]; }
  [[nodiscard]] double b(std::size_t p) const noexcept { return data[3 * p + 2]; }
};

inline float clamp01(double v) noexcept {
  return static_cast<float>(std::clamp(v, 0.0, 1.0));
}

inline void require_same_grid(const ImageBuffer& a, const ImageBuffer& b, const char* what) {
  if (!a.same_grid(b)) {
    throw InvalidArgument(std::string(what) + ": size mismatch (" + std::to_string(a.width()) + "x" +
                          std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                          std::to_string(b.height()) + ")");
  }
}

inline void require_single_channel(const ImageBuffer& m, const char* what) {
  if (m.channels() != 1) throw InvalidArgument(std::string(what) + ": expected a single-channel map");
}

// BT.601 luma for RGB, identity for gray.
inline ImageBuffer to_gray(const ImageBuffer& img) {
  if (img.channels() == 1) return img;
  ImageBuffer out(img.width(), img.height(), 1);
  const auto src = img.data();
  auto dst = out.data();
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    const double y = 0.299 * src[3 * p] + 0.587 * src[3 * p + 1] + 0.114 * src[3 * p + 2];
    dst[p] = clamp01(y);
  }
  return out;
}

inline ImageBuffer to_rgb(const ImageBuffer& img) {
  if (img.channels() == 3) return img;
  ImageBuffer out(img.width(), img.height(), 3);
  const auto src = img.data();
  auto dst = out.data();
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    dst[3 * p] = dst[3 * p + 1] = dst[3 * p + 2] = src[p];
  }
  return out;
}

}  // namespace bidbench
