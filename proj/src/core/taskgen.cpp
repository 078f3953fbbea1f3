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

#include "jigsaw/core/taskgen.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "jigsaw/core/errors.hpp"
#include "jigsaw/core/prompting.hpp"

namespace jigsaw {

namespace {

Question base_question(const PuzzleInstance& instance, TaskKind kind, PromptMode mode) {
  Question q;
  q.id = instance.id;
  q.kind = kind;
  q.mode = mode;
  q.grid = instance.grid;
  q.image_path = instance.image_path;
  q.meta.seed = instance.seed;
  q.meta.source_ref = instance.source_ref;
  q.meta.source_grid = instance.source_grid;
  q.meta.transposed = instance.transposed;
  q.meta.permutation = instance.perm;
  q.meta.mask = instance.mask;
  q.meta.patch_width = instance.patch_width;
  q.meta.patch_height = instance.patch_height;
  if (instance.patch_width > 0) {
    const auto [w, h] = composed_size(instance.patch_width, instance.patch_height, instance.grid, instance.mask);
    q.meta.image_width = w;
    q.meta.image_height = h;
  }
  return q;
}

int scaled_extent(int region_extent, double scale) {
  // Absorbs representation error such as 0.29 * 100 = 28.999...
  return static_cast<int>(std::floor(region_extent * scale + 1e-9));
}

}  // namespace

PuzzleInstance make_instance(std::string id, std::string source_ref, const GridSpec& grid, std::uint64_t seed,
                             const MaskConfig& mask, bool transpose_50) {
  PuzzleInstance inst;
  inst.id = std::move(id);
  inst.source_ref = std::move(source_ref);
  inst.source_grid = grid;
  inst.seed = seed;
  inst.mask = mask;
  Permutation perm = random_permutation(grid, seed);
  if (transpose_50) {
    Rng coin(seed, Stream::kTranspose);
    auto t = transpose_augment(grid, perm, coin);
    inst.grid = t.grid;
    inst.perm = std::move(t.perm);
    inst.transposed = t.transposed;
  } else {
    inst.grid = grid;
    inst.perm = std::move(perm);
  }
  return inst;
}

RasterImage render_puzzle(const RasterImage& source, PuzzleInstance& instance) {
  const RasterImage trimmed = trim_to_grid(source, instance.source_grid);
  auto patches = slice_patches(trimmed, instance.source_grid);
  if (instance.transposed) {
    std::vector<RasterImage> relabeled(patches.size());
    for (int k = 1; k <= instance.source_grid.piece_count(); ++k) {
      relabeled[static_cast<std::size_t>(transposed_position(k, instance.source_grid) - 1)] =
          std::move(patches[static_cast<std::size_t>(k - 1)]);
    }
    patches = std::move(relabeled);
  }
  instance.trimmed_width = trimmed.width();
  instance.trimmed_height = trimmed.height();
  instance.patch_width = patches[0].width();
  instance.patch_height = patches[0].height();
  return compose_shuffled(patches, instance.perm, instance.grid, instance.mask);
}

Question make_full(const PuzzleInstance& instance, PromptMode mode) {
  Question q = base_question(instance, TaskKind::kFull, mode);
  const auto values = instance.perm.values();
  q.truth = GridAnswer{{values.begin(), values.end()}};
  q.prompt = render(q);
  return q;
}

Question make_pair(const PuzzleInstance& instance, PromptMode mode, Rng& rng) {
  const auto count = static_cast<std::uint64_t>(instance.grid.piece_count());
  const int x = static_cast<int>(rng.below(count)) + 1;
  int y = static_cast<int>(rng.below(count - 1)) + 1;
  if (y >= x) ++y;
  auto order = legal_directions(instance.grid);
  rng.shuffle(std::span<Direction>(order));
  return make_pair(instance, mode, x, y, order);
}

Question make_pair(const PuzzleInstance& instance, PromptMode mode, int x, int y,
                   const std::vector<Direction>& choice_order) {
  const GridSpec& grid = instance.grid;
  if (!grid.contains(x) || !grid.contains(y) || x == y) {
    throw InvalidArgument(fmt::format("pair positions {} and {} must be distinct cells of {}", x, y,
                                      grid.to_string()));
  }
  auto legal = legal_directions(grid);
  auto sorted_order = choice_order;
  std::sort(legal.begin(), legal.end());
  std::sort(sorted_order.begin(), sorted_order.end());
  if (legal != sorted_order) {
    throw InvalidArgument(fmt::format("choice order must list each legal direction of {} once", grid.to_string()));
  }

  Question q = base_question(instance, TaskKind::kPair, mode);
  q.meta.pair_positions = std::make_pair(x, y);
  q.meta.choice_order = choice_order;
  const Direction truth = relative_direction(instance.perm[x], instance.perm[y], grid);
  for (std::size_t k = 0; k < choice_order.size(); ++k) {
    const char letter = static_cast<char>('A' + k);
    q.choices.push_back({letter, choice_order[k], direction_sentence(x, choice_order[k], y)});
    if (choice_order[k] == truth) q.truth = LetterAnswer{letter};
  }
  q.prompt = render(q);
  return q;
}

BoxTask make_box(int width, int height, const GridSpec& grid, int target_region, double patch_scale,
                 std::uint64_t seed, PromptMode mode, BoxSemantics semantics) {
  if (width <= 0 || height <= 0 || width % grid.cols() != 0 || height % grid.rows() != 0) {
    throw InvalidInput(fmt::format("{}x{} image is not trimmed to grid {}", width, height, grid.to_string()));
  }
  if (!grid.contains(target_region)) {
    throw InvalidInput(fmt::format("target region {} outside 1..{}", target_region, grid.piece_count()));
  }
  if (!(patch_scale > 0.0 && patch_scale <= 1.0)) {
    throw InvalidInput(fmt::format("patch scale {} outside (0, 1]", patch_scale));
  }
  const int rw = width / grid.cols();
  const int rh = height / grid.rows();
  const int pw = scaled_extent(rw, patch_scale);
  const int ph = scaled_extent(rh, patch_scale);
  if (pw < 1 || ph < 1) {
    throw InvalidInput(fmt::format("patch scale {} gives an empty patch in {}x{} regions", patch_scale, rw, rh));
  }

  BoxInstance box;
  box.grid = grid;
  box.target_region = target_region;
  box.patch_scale = patch_scale;
  box.semantics = semantics;
  box.image_width = width;
  box.image_height = height;

  Rng rects(seed, Stream::kBoxRects);
  for (int p = 1; p <= grid.piece_count(); ++p) {
    const std::int64_t rx = static_cast<std::int64_t>(grid.col_of(p) - 1) * rw;
    const std::int64_t ry = static_cast<std::int64_t>(grid.row_of(p) - 1) * rh;
    box.region_rects.push_back({rx, ry, rx + rw, ry + rh});
    const std::int64_t ox = rects.between(0, rw - pw);
    const std::int64_t oy = rects.between(0, rh - ph);
    box.patch_rects.push_back({rx + ox, ry + oy, rx + ox + pw, ry + oy + ph});
  }

  Rng swaps(seed, Stream::kBoxSwap);
  do {
    box.swap_perm = random_permutation(grid, swaps);
  } while (box.swap_perm[target_region] == target_region);

  const int source_region = semantics == BoxSemantics::kCurrentOccupantOrigin
                                ? box.swap_perm[target_region]
                                : box.swap_perm.inverse()[target_region];
  box.gt_bbox = box.patch_rects[static_cast<std::size_t>(source_region - 1)];

  Question q;
  q.kind = TaskKind::kBox;
  q.mode = mode;
  q.grid = grid;
  q.truth = BoxAnswer{box.gt_bbox};
  q.meta.seed = seed;
  q.meta.source_grid = grid;
  q.meta.target_region = target_region;
  q.meta.patch_scale = patch_scale;
  q.meta.box_semantics = semantics;
  q.meta.region_rects = box.region_rects;
  q.meta.patch_rects = box.patch_rects;
  q.meta.swap_perm = box.swap_perm;
  q.meta.image_width = width;
  q.meta.image_height = height;
  q.meta.patch_width = pw;
  q.meta.patch_height = ph;
  q.prompt = render(q);
  return {std::move(box), std::move(q)};
}

BoxTask make_box(const RasterImage& image, const GridSpec& grid, int target_region, double patch_scale,
                 std::uint64_t seed, PromptMode mode, BoxSemantics semantics) {
  const RasterImage trimmed = trim_to_grid(image, grid);
  return make_box(trimmed.width(), trimmed.height(), grid, target_region, patch_scale, seed, mode, semantics);
}

}  // namespace jigsaw
