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

#include "jigsaw/core/parsing.hpp"
#include "jigsaw/core/question.hpp"

namespace jigsaw {

inline constexpr double kFormatReward = 0.5;

/// accuracy in [0, 1], format in {0, 0.5}, total = accuracy + format.
struct RewardBreakdown {
  double accuracy = 0.0;
  double format = 0.0;
  double total = 0.0;
  friend bool operator==(const RewardBreakdown&, const RewardBreakdown&) = default;
};

/// 0.5 when the payload parsed and, in thinking mode, the four tags appear
/// exactly once each in order. 0 otherwise.
double format_reward(const ParsedResponse& parsed, PromptMode mode);

/// Intersection over union of half-open integer rects. A degenerate rect
/// (x1 >= x2 or y1 >= y2) on either side scores 0.
double iou(const PixelRect& a, const PixelRect& b) noexcept;

/// full: fraction of cells equal to the truth; pair: 1 for the right
/// letter; box: IoU. Unparseable or mis-shaped payloads score 0.
double accuracy_reward(const Payload& payload, const GroundTruth& truth, TaskKind kind);

/// Table metric. full: whole-grid exact match; pair: letter match; box:
/// correct iff IoU >= kBoxHitIou, value carries the IoU.
struct EvalOutcome {
  bool correct = false;
  double value = 0.0;  // 1/0 for full and pair, IoU for box
};

inline constexpr double kBoxHitIou = 0.5;

EvalOutcome eval_metric(const Payload& payload, const GroundTruth& truth, TaskKind kind);

/// Everything recorded about one scored response.
struct EvalRecord {
  std::string id;
  TaskKind kind = TaskKind::kFull;
  PromptMode mode = PromptMode::kThinking;
  GridSpec grid{2, 1};
  RewardBreakdown reward;
  bool eval_correct = false;
  double eval_value = 0.0;
  std::optional<double> iou;  // box only
  std::string parsed;         // describe(payload)
  TagCompliance tags;
  std::size_t completion_chars = 0;   // UTF-8 code points
  std::size_t completion_tokens = 0;  // whitespace-delimited
  std::optional<std::string> step;
};

std::size_t whitespace_token_count(std::string_view text) noexcept;
/// Code points in UTF-8 text (continuation bytes are not counted).
std::size_t utf8_length(std::string_view text) noexcept;

/// parse_response + rewards + eval metric for one raw model output.
EvalRecord score_response(const Question& question, std::string_view raw);

}  // namespace jigsaw
