/*
 * Copyright 2026 The Jigsaw-RL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "jigsaw/core/puzzle.hpp"

namespace jigsaw {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Integer pixel rectangle, origin top-left, half-open on the right and
/// bottom: it covers x in [x1, x2) and y in [y1, y2).
struct PixelRect {
  std::int64_t x1 = 0;
  std::int64_t y1 = 0;
  std::int64_t x2 = 0;
  std::int64_t y2 = 0;

  std::int64_t width() const noexcept { return x2 - x1; }
  std::int64_t height() const noexcept { return y2 - y1; }
  bool empty() const noexcept { return x1 >= x2 || y1 >= y2; }
  std::int64_t area() const noexcept { return empty() ? 0 : width() * height(); }
  bool inside(const PixelRect& outer) const noexcept {
    return x1 >= outer.x1 && y1 >= outer.y1 && x2 <= outer.x2 && y2 <= outer.y2;
  }
  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

/// 8-bit RGB raster, rows stored top to bottom.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, Rgb fill = {});
  RasterImage(int width, int height, std::vector<std::uint8_t> rgb);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  PixelRect bounds() const noexcept { return {0, 0, width_, height_}; }

  Rgb at(int x, int y) const noexcept {
    const auto* p = &data_[index(x, y)];
    return {p[0], p[1], p[2]};
  }
  void set(int x, int y, Rgb c) noexcept {
    auto* p = &data_[index(x, y)];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

  std::span<const std::uint8_t> bytes() const noexcept { return data_; }

  /// Copy of `rect`. Throws InvalidInput if it is empty or leaves the image.
  RasterImage crop(const PixelRect& rect) const;
  /// Writes `src` with its top-left corner at (x, y). Throws InvalidInput if
  /// it does not fit.
  void paste(const RasterImage& src, int x, int y);
  void fill(const PixelRect& rect, Rgb c);

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Gap bands drawn between patches. gap_px == 0 exactly when disabled.
struct MaskConfig {
  bool enabled = false;
  int gap_px = 0;
  Rgb fill{};

  static MaskConfig none() { return {}; }
  /// gap_px == 0 yields a disabled mask. Throws ConfigError on negative gaps.
  static MaskConfig with_gap(int gap_px, Rgb fill = {});

  friend bool operator==(const MaskConfig&, const MaskConfig&) = default;
};

/// Decodes PNG or JPEG (sniffed from the file signature). Alpha is dropped and
/// grayscale or palette images are expanded to RGB. Throws IoError.
RasterImage load_image(const std::filesystem::path& path);
void save_png(const RasterImage& image, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_png(const RasterImage& image);

/// Crops the bottom and right edges so height and width are multiples of the
/// grid. Throws InvalidInput if the image is smaller than the grid.
RasterImage trim_to_grid(const RasterImage& image, const GridSpec& grid);

/// Patches in row-major order. Throws InvalidInput unless the image
/// dimensions are exact multiples of the grid.
std::vector<RasterImage> slice_patches(const RasterImage& image, const GridSpec& grid);

/// Output dimensions of compose_shuffled for a given patch size.
std::pair<int, int> composed_size(int patch_width, int patch_height, const GridSpec& grid, const MaskConfig& mask);

/// Places patches[perm[x] - 1] at shuffled slot x. With a mask, gap_px-wide
/// bands of the fill colour separate neighbouring patches. Throws
/// InvalidInput on count or size mismatches.
RasterImage compose_shuffled(std::span<const RasterImage> patches, const Permutation& perm, const GridSpec& grid,
                             const MaskConfig& mask);

/// Inverse of compose_shuffled: recovers the trimmed source from a composed
/// puzzle given the ground-truth permutation.
RasterImage unshuffle(const RasterImage& composed, const Permutation& perm, const GridSpec& grid,
                      const MaskConfig& mask);

/// For every slot s, the pixels inside patch_rects[s] are replaced by the
/// source pixels of patch_rects[swap[s] - 1]. All rects must share one size
/// and lie inside the image; throws InvalidInput otherwise.
RasterImage render_box_swap(const RasterImage& image, std::span<const PixelRect> patch_rects,
                            const Permutation& swap);

}  // namespace jigsaw
