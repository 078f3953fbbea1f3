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

#include "jigsaw/core/scoring.hpp"

#include <algorithm>

namespace jigsaw {

double format_reward(const ParsedResponse& parsed_response, PromptMode mode) {
  if (!parsed(parsed_response.payload)) return 0.0;
  if (mode == PromptMode::kThinking && !parsed_response.tags.correct_order) return 0.0;
  return kFormatReward;
}

double iou(const PixelRect& a, const PixelRect& b) noexcept {
  if (a.empty() || b.empty()) return 0.0;
  const std::int64_t iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const std::int64_t ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  // Long double keeps products of large coordinates exact.
  const long double inter = (iw > 0 && ih > 0) ? static_cast<long double>(iw) * ih : 0.0L;
  const long double uni = static_cast<long double>(a.width()) * a.height() +
                          static_cast<long double>(b.width()) * b.height() - inter;
  return uni > 0 ? static_cast<double>(inter / uni) : 0.0;
}

double accuracy_reward(const Payload& payload, const GroundTruth& truth, TaskKind kind) {
  switch (kind) {
    case TaskKind::kFull: {
      const auto* got = std::get_if<GridAnswer>(&payload);
      const auto* want = std::get_if<GridAnswer>(&truth);
      if (!got || !want || got->values.size() != want->values.size() || want->values.empty()) return 0.0;
      std::size_t hits = 0;
      for (std::size_t i = 0; i < want->values.size(); ++i) hits += got->values[i] == want->values[i];
      return static_cast<double>(hits) / static_cast<double>(want->values.size());
    }
    case TaskKind::kPair: {
      const auto* got = std::get_if<LetterAnswer>(&payload);
      const auto* want = std::get_if<LetterAnswer>(&truth);
      return (got && want && got->letter == want->letter) ? 1.0 : 0.0;
    }
    case TaskKind::kBox: {
      const auto* got = std::get_if<BoxAnswer>(&payload);
      const auto* want = std::get_if<BoxAnswer>(&truth);
      return (got && want) ? iou(got->rect, want->rect) : 0.0;
    }
  }
  return 0.0;
}

EvalOutcome eval_metric(const Payload& payload, const GroundTruth& truth, TaskKind kind) {
  if (kind == TaskKind::kBox) {
    const double v = accuracy_reward(payload, truth, kind);
    return {v >= kBoxHitIou, v};
  }
  const bool exact = accuracy_reward(payload, truth, kind) == 1.0;
  return {exact, exact ? 1.0 : 0.0};
}

std::size_t utf8_length(std::string_view text) noexcept {
  return static_cast<std::size_t>(
      std::count_if(text.begin(), text.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::size_t whitespace_token_count(std::string_view text) noexcept {
  std::size_t count = 0;
  bool in_token = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

EvalRecord score_response(const Question& question, std::string_view raw) {
  const ParsedResponse parsed_response = parse_response(raw, question);
  EvalRecord rec;
  rec.id = question.id;
  rec.kind = question.kind;
  rec.mode = question.mode;
  rec.grid = question.grid;
  rec.reward.accuracy = accuracy_reward(parsed_response.payload, question.truth, question.kind);
  rec.reward.format = format_reward(parsed_response, question.mode);
  rec.reward.total = rec.reward.accuracy + rec.reward.format;
  const EvalOutcome outcome = eval_metric(parsed_response.payload, question.truth, question.kind);
  rec.eval_correct = outcome.correct;
  rec.eval_value = outcome.value;
  if (question.kind == TaskKind::kBox) rec.iou = rec.reward.accuracy;
  rec.parsed = describe(parsed_response.payload);
  rec.tags = parsed_response.tags;
  rec.completion_chars = utf8_length(raw);
  rec.completion_tokens = whitespace_token_count(raw);
  return rec;
}

}  // namespace jigsaw
