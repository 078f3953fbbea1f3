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
#include <optional>
#include <string>
#include <vector>

#include "jigsaw/core/imaging.hpp"
#include "jigsaw/core/puzzle.hpp"
#include "jigsaw/core/question.hpp"
#include "jigsaw/core/rng.hpp"

namespace jigsaw {

/// A shuffled-grid puzzle. `grid` is the layout the model sees; it differs
/// from `source_grid` only when the instance was transposed.
struct PuzzleInstance {
  std::string id;
  std::string source_ref;
  GridSpec grid{2, 1};
  GridSpec source_grid{2, 1};
  bool transposed = false;
  Permutation perm;
  std::uint64_t seed = 0;
  MaskConfig mask;
  std::string image_path;
  int trimmed_width = 0;
  int trimmed_height = 0;
  int patch_width = 0;
  int patch_height = 0;
};

/// Draws the permutation (and the transposition coin when requested) from
/// `seed`. Geometry fields are left for render_puzzle to fill in.
PuzzleInstance make_instance(std::string id, std::string source_ref, const GridSpec& grid, std::uint64_t seed,
                             const MaskConfig& mask, bool transpose_50);

/// Trims and slices `source` on the source grid, then composes the shuffled
/// puzzle on the instance grid. Fills the dimension fields of `instance`.
RasterImage render_puzzle(const RasterImage& source, PuzzleInstance& instance);

/// Ground truth is the permutation itself, one row of the grid per line.
Question make_full(const PuzzleInstance& instance, PromptMode mode);

/// Selects two distinct current positions and shuffles the legal direction
/// options uniformly.
Question make_pair(const PuzzleInstance& instance, PromptMode mode, Rng& rng);

/// Deterministic variant: positions and option order are given. Used for
/// regeneration and fixtures. Throws InvalidArgument on an illegal order.
Question make_pair(const PuzzleInstance& instance, PromptMode mode, int x, int y,
                   const std::vector<Direction>& choice_order);

struct BoxInstance {
  GridSpec grid{2, 1};
  std::vector<PixelRect> region_rects;
  std::vector<PixelRect> patch_rects;
  Permutation swap_perm;  // swap_perm[s]: region whose patch is shown in slot s
  int target_region = 1;
  PixelRect gt_bbox;
  double patch_scale = 0.5;
  BoxSemantics semantics = BoxSemantics::kCurrentOccupantOrigin;
  int image_width = 0;
  int image_height = 0;
};

struct BoxTask {
  BoxInstance box;
  Question question;
};

inline constexpr double kDefaultPatchScale = 0.5;

/// Box question over a `width` x `height` image that is already trimmed to
/// the grid. Patch rects are drawn from Stream::kBoxRects of `seed` and the
/// swap from Stream::kBoxSwap by rejection sampling until the patch shown in
/// the target region comes from elsewhere. Throws InvalidInput when
/// patch_scale is outside (0, 1] or yields an empty patch.
BoxTask make_box(int width, int height, const GridSpec& grid, int target_region, double patch_scale,
                 std::uint64_t seed, PromptMode mode, BoxSemantics semantics = BoxSemantics::kCurrentOccupantOrigin);

/// Image overload: trims `image` to the grid first.
BoxTask make_box(const RasterImage& image, const GridSpec& grid, int target_region, double patch_scale,
                 std::uint64_t seed, PromptMode mode, BoxSemantics semantics = BoxSemantics::kCurrentOccupantOrigin);

}  // namespace jigsaw
