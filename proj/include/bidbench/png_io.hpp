#pragma once

#include <png.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bidbench/error.hpp"
#include "bidbench/image.hpp"

namespace bidbench {

// Round-half-to-even quantization of a [0,1] sample to a byte.
inline std::uint8_t quantize(float s) noexcept {
  const double scaled = std::clamp(static_cast<double>(s), 0.0, 1.0) * 255.0;
  return static_cast<std::uint8_t>(std::nearbyint(scaled));
}

inline float dequantize(std::uint8_t b) noexcept { return static_cast<float>(b / 255.0); }

/// Decode an 8-bit gray or RGB PNG. Palette files are expanded to RGB and an
/// alpha channel, if present, is dropped. 16-bit files are rejected.
inline ImageBuffer load_image(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw AssetError("load_image: no such file: " + path.string());
  }
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_file(&image, path.c_str()) == 0) {
    throw IoError("load_image: " + path.string() + ": " + image.message);
  }
  if ((image.format & PNG_FORMAT_FLAG_LINEAR) != 0) {
    png_image_free(&image);
    throw IoError("load_image: " + path.string() + ": unsupported bit depth (only 8-bit PNG)");
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  const bool alpha = (image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  const int channels = color ? 3 : 1;
  const int stored = channels + (alpha ? 1 : 0);
  image.format = color ? (alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB)
                       : (alpha ? PNG_FORMAT_GA : PNG_FORMAT_GRAY);

  std::vector<std::uint8_t> raw(PNG_IMAGE_SIZE(image));
  if (png_image_finish_read(&image, nullptr, raw.data(), 0, nullptr) == 0) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError("load_image: " + path.string() + ": " + msg);
  }

  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  ImageBuffer out(w, h, channels);
  auto dst = out.data();
  const std::size_t n = out.pixel_count();
  for (std::size_t p = 0; p < n; ++p) {
    for (int c = 0; c < channels; ++c) {
      dst[p * channels + c] = dequantize(raw[p * stored + c]);
    }
  }
  return out;
}

inline std::vector<std::uint8_t> to_bytes(const ImageBuffer& img) {
  std::vector<std::uint8_t> bytes(img.data().size());
  const auto src = img.data();
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize(src[i]);
  return bytes;
}

inline void save_image(const ImageBuffer& img, const std::filesystem::path& path) {
  if (img.empty()) throw InvalidArgument("save_image: empty buffer");
  const auto bytes = to_bytes(img);
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  if (png_image_write_to_file(&image, path.c_str(), 0, bytes.data(), 0, nullptr) == 0) {
    throw IoError("save_image: " + path.string() + ": " + image.message);
  }
}

}  // namespace bidbench
