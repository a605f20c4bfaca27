#pragma once

#include <algorithm>
#include <filesystem>
#include <vector>

#include "bidbench/error.hpp"
#include "bidbench/image.hpp"
#include "bidbench/manifest.hpp"
#include "bidbench/png_io.hpp"

namespace bidbench {

struct PreviewLayout {
  int rows = 0;
  int columns = 0;  // 1 + max selected components over the chosen rows
  int tile_width = 0;
  int tile_height = 0;
};

/// First k samples by sample_id; one row per sample: mixed input, then the
/// ground truth of each selected component in index order. Unused tiles stay
/// black.
inline ImageBuffer build_preview(const std::vector<MixManifest>& manifests, const std::filesystem::path& dataset_root,
                                 int k, PreviewLayout* layout = nullptr) {
  if (k < 1) throw InvalidArgument("preview: k must be >= 1");
  if (manifests.empty()) throw InvalidArgument("preview: no samples");
  std::vector<const MixManifest*> rows;
  for (const auto& m : manifests) rows.push_back(&m);
  std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->sample_id < b->sample_id; });
  rows.resize(std::min<std::size_t>(rows.size(), static_cast<std::size_t>(k)));

  PreviewLayout lay;
  lay.rows = static_cast<int>(rows.size());
  lay.tile_width = rows.front()->width;
  lay.tile_height = rows.front()->height;
  int l_max = 0;
  for (auto* m : rows) {
    if (m->width != lay.tile_width || m->height != lay.tile_height) {
      throw InvalidArgument("preview: samples have different sizes");
    }
    l_max = std::max(l_max, m->mask.count());
  }
  lay.columns = 1 + l_max;
  if (layout != nullptr) *layout = lay;

  ImageBuffer sheet(lay.columns * lay.tile_width, lay.rows * lay.tile_height, 3);
  auto blit = [&](const ImageBuffer& tile, int col, int row) {
    const auto rgb = to_rgb(tile);
    if (rgb.width() != lay.tile_width || rgb.height() != lay.tile_height) {
      throw InvalidArgument("preview: tile size differs from manifest size");
    }
    for (int y = 0; y < lay.tile_height; ++y)
      for (int x = 0; x < lay.tile_width; ++x)
        for (int c = 0; c < 3; ++c)
          sheet.at(col * lay.tile_width + x, row * lay.tile_height + y, c) = rgb.at(x, y, c);
  };
  for (int r = 0; r < lay.rows; ++r) {
    const auto& m = *rows[r];
    blit(load_image(dataset_root / m.mixed_path), 0, r);
    int col = 1;
    for (const auto& name : m.selected_names()) {
      blit(load_image(dataset_root / m.gt_paths.at(name)), col++, r);
    }
  }
  return sheet;
}

inline PreviewLayout run_preview(const std::filesystem::path& manifest_path, int k,
                                 const std::filesystem::path& out_path) {
  const auto manifests = read_manifests(manifest_path);
  PreviewLayout layout;
  save_image(build_preview(manifests, manifest_path.parent_path(), k, &layout), out_path);
  return layout;
}

}  // namespace bidbench
