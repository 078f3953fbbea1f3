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

#include "jigsaw/core/imaging.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>

#include <fmt/format.h>

extern "C" {
#include <jpeglib.h>
}

#include "jigsaw/core/errors.hpp"

namespace jigsaw {

namespace {

std::string rect_string(const PixelRect& r) { return fmt::format("({},{},{},{})", r.x1, r.y1, r.x2, r.y2); }

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RasterImage decode_png(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw IoError(fmt::format("'{}': {}", path.string(), img.message));
  }
  // Read with alpha so it can be dropped rather than composited.
  img.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, rgba.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw IoError(fmt::format("'{}': {}", path.string(), msg));
  }
  const auto pixels = static_cast<std::size_t>(img.width) * img.height;
  std::vector<std::uint8_t> rgb(pixels * 3);
  for (std::size_t i = 0; i < pixels; ++i) {
    rgb[3 * i] = rgba[4 * i];
    rgb[3 * i + 1] = rgba[4 * i + 1];
    rgb[3 * i + 2] = rgba[4 * i + 2];
  }
  return RasterImage(static_cast<int>(img.width), static_cast<int>(img.height), std::move(rgb));
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// Kept free of non-trivial locals: longjmp skips destructors.
bool decode_jpeg_raw(const std::vector<std::uint8_t>& bytes, std::vector<std::uint8_t>& out, int& width,
                     int& height, char* message) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    std::strncpy(message, err.message, JMSG_LENGTH_MAX);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  if (cinfo.jpeg_color_space == JCS_CMYK || cinfo.jpeg_color_space == JCS_YCCK) {
    std::strncpy(message, "CMYK JPEG is not supported", JMSG_LENGTH_MAX);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = static_cast<int>(cinfo.output_width);
  height = static_cast<int>(cinfo.output_height);
  out.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = out.data() + static_cast<std::size_t>(cinfo.output_scanline) * static_cast<std::size_t>(width) * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

RasterImage decode_jpeg(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path) {
  std::vector<std::uint8_t> rgb;
  int width = 0;
  int height = 0;
  char message[JMSG_LENGTH_MAX] = {};
  if (!decode_jpeg_raw(bytes, rgb, width, height, message)) {
    throw IoError(fmt::format("'{}': {}", path.string(), message));
  }
  return RasterImage(width, height, std::move(rgb));
}

void check_patch_set(std::span<const RasterImage> patches, const GridSpec& grid) {
  if (static_cast<int>(patches.size()) != grid.piece_count()) {
    throw InvalidInput(fmt::format("expected {} patches for grid {}, got {}", grid.piece_count(), grid.to_string(),
                                   patches.size()));
  }
  for (const auto& p : patches) {
    if (p.width() != patches[0].width() || p.height() != patches[0].height()) {
      throw InvalidInput("patches must share one size");
    }
  }
  if (patches[0].width() < 1 || patches[0].height() < 1) throw InvalidInput("patches must be non-empty");
}

}  // namespace

RasterImage::RasterImage(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw InvalidInput("negative image dimensions");
  data_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

RasterImage::RasterImage(int width, int height, std::vector<std::uint8_t> rgb)
    : width_(width), height_(height), data_(std::move(rgb)) {
  if (width < 0 || height < 0) throw InvalidInput("negative image dimensions");
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3) {
    throw InvalidInput("pixel buffer does not match dimensions");
  }
}

RasterImage RasterImage::crop(const PixelRect& rect) const {
  if (rect.empty() || !rect.inside(bounds())) {
    throw InvalidInput(fmt::format("crop rect {} outside {}x{} image", rect_string(rect), width_, height_));
  }
  const int w = static_cast<int>(rect.width());
  const int h = static_cast<int>(rect.height());
  RasterImage out(w, h);
  const std::size_t row_bytes = static_cast<std::size_t>(w) * 3;
  for (int y = 0; y < h; ++y) {
    std::memcpy(&out.data_[out.index(0, y)], &data_[index(static_cast<int>(rect.x1), static_cast<int>(rect.y1) + y)],
                row_bytes);
  }
  return out;
}

void RasterImage::paste(const RasterImage& src, int x, int y) {
  const PixelRect target{x, y, static_cast<std::int64_t>(x) + src.width_, static_cast<std::int64_t>(y) + src.height_};
  if (!target.inside(bounds())) {
    throw InvalidInput(fmt::format("paste target {} outside {}x{} image", rect_string(target), width_, height_));
  }
  if (src.width_ == 0) return;
  const std::size_t row_bytes = static_cast<std::size_t>(src.width_) * 3;
  for (int row = 0; row < src.height_; ++row) {
    std::memcpy(&data_[index(x, y + row)], &src.data_[src.index(0, row)], row_bytes);
  }
}

void RasterImage::fill(const PixelRect& rect, Rgb c) {
  if (!rect.inside(bounds())) throw InvalidInput(fmt::format("fill rect {} outside image", rect_string(rect)));
  for (auto y = rect.y1; y < rect.y2; ++y) {
    for (auto x = rect.x1; x < rect.x2; ++x) set(static_cast<int>(x), static_cast<int>(y), c);
  }
}

MaskConfig MaskConfig::with_gap(int gap_px, Rgb fill) {
  if (gap_px < 0) throw ConfigError("mask gap must be non-negative");
  if (gap_px == 0) return none();
  return {true, gap_px, fill};
}

RasterImage load_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  static constexpr std::uint8_t kPngSig[] = {0x89, 'P', 'N', 'G'};
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kPngSig, 4) == 0) return decode_png(bytes, path);
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) return decode_jpeg(bytes, path);
  throw IoError(fmt::format("'{}': not a PNG or JPEG file", path.string()));
}

std::vector<std::uint8_t> encode_png(const RasterImage& image) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(img, size, 0, image.bytes().data(), 0, nullptr)) {
    throw IoError(fmt::format("PNG encode failed: {}", img.message));
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, image.bytes().data(), 0, nullptr)) {
    throw IoError(fmt::format("PNG encode failed: {}", img.message));
  }
  out.resize(size);
  return out;
}

void save_png(const RasterImage& image, const std::filesystem::path& path) {
  const auto bytes = encode_png(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(fmt::format("short write to '{}'", path.string()));
}

RasterImage trim_to_grid(const RasterImage& image, const GridSpec& grid) {
  if (image.height() < grid.rows() || image.width() < grid.cols()) {
    throw InvalidInput(fmt::format("{}x{} image is smaller than grid {}", image.width(), image.height(),
                                   grid.to_string()));
  }
  const int w = image.width() / grid.cols() * grid.cols();
  const int h = image.height() / grid.rows() * grid.rows();
  if (w == image.width() && h == image.height()) return image;
  return image.crop({0, 0, w, h});
}

std::vector<RasterImage> slice_patches(const RasterImage& image, const GridSpec& grid) {
  if (image.width() % grid.cols() != 0 || image.height() % grid.rows() != 0 || image.width() == 0 ||
      image.height() == 0) {
    throw InvalidInput(fmt::format("{}x{} image is not divisible by grid {}", image.width(), image.height(),
                                   grid.to_string()));
  }
  const int pw = image.width() / grid.cols();
  const int ph = image.height() / grid.rows();
  std::vector<RasterImage> patches;
  patches.reserve(static_cast<std::size_t>(grid.piece_count()));
  for (int r = 0; r < grid.rows(); ++r) {
    for (int c = 0; c < grid.cols(); ++c) {
      patches.push_back(image.crop({c * pw, r * ph, (c + 1) * pw, (r + 1) * ph}));
    }
  }
  return patches;
}

std::pair<int, int> composed_size(int patch_width, int patch_height, const GridSpec& grid, const MaskConfig& mask) {
  const int gap = mask.enabled ? mask.gap_px : 0;
  return {patch_width * grid.cols() + (grid.cols() - 1) * gap, patch_height * grid.rows() + (grid.rows() - 1) * gap};
}

RasterImage compose_shuffled(std::span<const RasterImage> patches, const Permutation& perm, const GridSpec& grid,
                             const MaskConfig& mask) {
  check_patch_set(patches, grid);
  if (perm.size() != grid.piece_count()) throw InvalidInput("permutation size does not match grid");
  const int pw = patches[0].width();
  const int ph = patches[0].height();
  const int gap = mask.enabled ? mask.gap_px : 0;
  const auto [w, h] = composed_size(pw, ph, grid, mask);
  RasterImage out(w, h, mask.fill);
  for (int x = 1; x <= grid.piece_count(); ++x) {
    const int r = grid.row_of(x) - 1;
    const int c = grid.col_of(x) - 1;
    out.paste(patches[static_cast<std::size_t>(perm[x] - 1)], c * (pw + gap), r * (ph + gap));
  }
  return out;
}

RasterImage unshuffle(const RasterImage& composed, const Permutation& perm, const GridSpec& grid,
                      const MaskConfig& mask) {
  const int gap = mask.enabled ? mask.gap_px : 0;
  const int inner_w = composed.width() - (grid.cols() - 1) * gap;
  const int inner_h = composed.height() - (grid.rows() - 1) * gap;
  if (inner_w <= 0 || inner_h <= 0 || inner_w % grid.cols() != 0 || inner_h % grid.rows() != 0) {
    throw InvalidInput("composed image does not match grid and mask");
  }
  if (perm.size() != grid.piece_count()) throw InvalidInput("permutation size does not match grid");
  const int pw = inner_w / grid.cols();
  const int ph = inner_h / grid.rows();
  RasterImage out(pw * grid.cols(), ph * grid.rows());
  for (int x = 1; x <= grid.piece_count(); ++x) {
    const int sr = grid.row_of(x) - 1;
    const int sc = grid.col_of(x) - 1;
    const int o = perm[x];
    const int orow = grid.row_of(o) - 1;
    const int ocol = grid.col_of(o) - 1;
    out.paste(composed.crop({sc * (pw + gap), sr * (ph + gap), sc * (pw + gap) + pw, sr * (ph + gap) + ph}),
              ocol * pw, orow * ph);
  }
  return out;
}

RasterImage render_box_swap(const RasterImage& image, std::span<const PixelRect> patch_rects,
                            const Permutation& swap) {
  if (static_cast<int>(patch_rects.size()) != swap.size()) {
    throw InvalidInput("swap permutation size does not match patch count");
  }
  for (const auto& r : patch_rects) {
    if (r.empty() || !r.inside(image.bounds())) {
      throw InvalidInput(fmt::format("patch rect {} outside {}x{} image", rect_string(r), image.width(),
                                     image.height()));
    }
    if (r.width() != patch_rects[0].width() || r.height() != patch_rects[0].height()) {
      throw InvalidInput("patch rects must share one size");
    }
  }
  std::vector<RasterImage> sources;
  sources.reserve(patch_rects.size());
  for (const auto& r : patch_rects) sources.push_back(image.crop(r));

  RasterImage out = image;
  for (int s = 1; s <= swap.size(); ++s) {
    const auto& dst = patch_rects[static_cast<std::size_t>(s - 1)];
    out.paste(sources[static_cast<std::size_t>(swap[s] - 1)], static_cast<int>(dst.x1), static_cast<int>(dst.y1));
  }
  return out;
}

}  // namespace jigsaw
