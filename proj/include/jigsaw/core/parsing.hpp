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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "jigsaw/core/puzzle.hpp"
#include "jigsaw/core/question.hpp"

namespace jigsaw {

/// Tag occurrence counts. correct_order holds iff every tag appears exactly
/// once in the order <think> </think> <answer> </answer>.
struct TagCompliance {
  int think_open = 0;
  int think_close = 0;
  int answer_open = 0;
  int answer_close = 0;
  bool correct_order = false;
  friend bool operator==(const TagCompliance&, const TagCompliance&) = default;
};

struct Unparseable {
  friend bool operator==(const Unparseable&, const Unparseable&) = default;
};

/// Parsed answer: nothing, a grid, a letter or a box (GridAnswer etc. are
/// shared with ground truth so both sides compare directly).
using Payload = std::variant<Unparseable, GridAnswer, LetterAnswer, BoxAnswer>;

inline bool parsed(const Payload& p) noexcept { return !std::holds_alternative<Unparseable>(p); }

/// Compact text form used in diagnostics: "unparseable", "2 1/4 3", "B",
/// "10,20,110,220".
std::string describe(const Payload& p);

struct ParsedResponse {
  std::optional<std::string> think_text;
  std::optional<std::string> answer_text;
  Payload payload;
  TagCompliance tags;
};

enum class AnswerSchema { kGrid, kLetter, kBbox };

inline AnswerSchema schema_for(TaskKind kind) noexcept {
  switch (kind) {
    case TaskKind::kFull: return AnswerSchema::kGrid;
    case TaskKind::kPair: return AnswerSchema::kLetter;
    case TaskKind::kBox: return AnswerSchema::kBbox;
  }
  return AnswerSchema::kGrid;
}

/// Counts tags and cuts out the think and answer regions. In non-thinking
/// mode the answer region is the whole output. Total: never throws on any
/// input; payload is left Unparseable.
ParsedResponse extract_regions(std::string_view raw, PromptMode mode);

/// Last block of `grid.rows()` consecutive lines that each hold exactly
/// `grid.cols()` integers (whitespace or comma separated, optional
/// surrounding brackets).
std::optional<GridAnswer> parse_grid(std::string_view region, const GridSpec& grid);

/// Last standalone letter (optionally parenthesised) within A..A+num_choices-1,
/// case-insensitive, returned in upper case.
std::optional<LetterAnswer> parse_letter(std::string_view region, int num_choices);

/// Last run of four comma-separated integers. A longer comma-separated run
/// contributes its final four values.
std::optional<BoxAnswer> parse_bbox(std::string_view region);

/// extract_regions followed by schema parsing of the answer region.
ParsedResponse parse_response(std::string_view raw, PromptMode mode, AnswerSchema schema, const GridSpec& grid,
                              int num_choices);

inline ParsedResponse parse_response(std::string_view raw, const Question& q) {
  return parse_response(raw, q.mode, schema_for(q.kind), q.grid, q.num_choices());
}

}  // namespace jigsaw
