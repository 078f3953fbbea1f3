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
#include <string_view>
#include <variant>
#include <vector>

#include "jigsaw/core/imaging.hpp"
#include "jigsaw/core/puzzle.hpp"

namespace jigsaw {

enum class TaskKind { kFull, kPair, kBox };
enum class PromptMode { kThinking, kNonThinking };

std::string_view to_string(TaskKind kind) noexcept;
std::string_view to_string(PromptMode mode) noexcept;
/// "full" | "pair" | "box". Throws ConfigError.
TaskKind task_kind_from_string(std::string_view s);
/// "think" | "nothink" (also "thinking" | "non-thinking"). Throws ConfigError.
PromptMode prompt_mode_from_string(std::string_view s);

/// Number of answer options a pair question on `grid` offers: 2 or 8.
int pair_choice_count(const GridSpec& grid) noexcept;

/// Full-question answer: rows*cols values in row-major order.
struct GridAnswer {
  std::vector<std::int64_t> values;
  friend bool operator==(const GridAnswer&, const GridAnswer&) = default;
};

struct LetterAnswer {
  char letter = 'A';
  friend bool operator==(const LetterAnswer&, const LetterAnswer&) = default;
};

struct BoxAnswer {
  PixelRect rect;
  friend bool operator==(const BoxAnswer&, const BoxAnswer&) = default;
};

using GroundTruth = std::variant<GridAnswer, LetterAnswer, BoxAnswer>;

/// "2 1\n4 3", "B" or "10,20,110,220".
std::string render_answer(const GroundTruth& truth, const GridSpec& grid);

struct PairChoice {
  char letter = 'A';
  Direction direction = Direction::kLeft;
  std::string text;
  friend bool operator==(const PairChoice&, const PairChoice&) = default;
};

/// Which box the box task asks for. kCurrentOccupantOrigin follows the
/// model-facing prompt: where did the patch now shown in region i come from.
/// kTargetPatchLocation: where is region i's own patch shown now.
enum class BoxSemantics { kCurrentOccupantOrigin, kTargetPatchLocation };
std::string_view to_string(BoxSemantics s) noexcept;
BoxSemantics box_semantics_from_string(std::string_view s);

/// Generation metadata. Enough to regenerate the question bit-exactly.
struct QuestionMeta {
  std::uint64_t seed = 0;
  std::string source_ref;
  std::optional<GridSpec> source_grid;
  bool transposed = false;
  std::optional<Permutation> permutation;  // full and pair
  std::optional<std::pair<int, int>> pair_positions;
  std::vector<Direction> choice_order;
  std::optional<int> target_region;
  std::optional<double> patch_scale;
  std::optional<BoxSemantics> box_semantics;
  std::vector<PixelRect> region_rects;
  std::vector<PixelRect> patch_rects;
  std::optional<Permutation> swap_perm;
  MaskConfig mask;
  int image_width = 0;   // of the emitted puzzle image
  int image_height = 0;
  int patch_width = 0;
  int patch_height = 0;
  friend bool operator==(const QuestionMeta&, const QuestionMeta&) = default;
};

/// The model-facing unit: prompt, answer schema and ground truth.
struct Question {
  std::string id;
  TaskKind kind = TaskKind::kFull;
  PromptMode mode = PromptMode::kThinking;
  GridSpec grid{2, 1};
  std::string prompt;
  GroundTruth truth;
  std::vector<PairChoice> choices;  // pair only, in presentation order
  std::string image_path;
  QuestionMeta meta;

  /// 2 or 8 for pair questions, 0 otherwise.
  int num_choices() const noexcept {
    if (kind != TaskKind::kPair) return 0;
    return choices.empty() ? pair_choice_count(grid) : static_cast<int>(choices.size());
  }

  friend bool operator==(const Question&, const Question&) = default;
};

}  // namespace jigsaw
