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

#include "jigsaw/core/question.hpp"

#include <fmt/format.h>

#include "jigsaw/core/errors.hpp"

namespace jigsaw {

std::string_view to_string(TaskKind kind) noexcept {
  switch (kind) {
    case TaskKind::kFull: return "full";
    case TaskKind::kPair: return "pair";
    case TaskKind::kBox: return "box";
  }
  return "?";
}

std::string_view to_string(PromptMode mode) noexcept {
  return mode == PromptMode::kThinking ? "think" : "nothink";
}

TaskKind task_kind_from_string(std::string_view s) {
  if (s == "full") return TaskKind::kFull;
  if (s == "pair") return TaskKind::kPair;
  if (s == "box") return TaskKind::kBox;
  throw ConfigError(fmt::format("unknown task kind '{}' (expected full, pair or box)", s));
}

PromptMode prompt_mode_from_string(std::string_view s) {
  if (s == "think" || s == "thinking") return PromptMode::kThinking;
  if (s == "nothink" || s == "non-thinking") return PromptMode::kNonThinking;
  throw ConfigError(fmt::format("unknown mode '{}' (expected think or nothink)", s));
}

int pair_choice_count(const GridSpec& grid) noexcept { return grid.is_line() ? 2 : 8; }

std::string_view to_string(BoxSemantics s) noexcept {
  return s == BoxSemantics::kCurrentOccupantOrigin ? "occupant-origin" : "target-location";
}

BoxSemantics box_semantics_from_string(std::string_view s) {
  if (s == "occupant-origin") return BoxSemantics::kCurrentOccupantOrigin;
  if (s == "target-location") return BoxSemantics::kTargetPatchLocation;
  throw ConfigError(fmt::format("unknown box semantics '{}'", s));
}

std::string render_answer(const GroundTruth& truth, const GridSpec& grid) {
  if (const auto* g = std::get_if<GridAnswer>(&truth)) {
    std::string out;
    for (std::size_t i = 0; i < g->values.size(); ++i) {
      if (i > 0) out += (i % static_cast<std::size_t>(grid.cols()) == 0) ? '\n' : ' ';
      out += std::to_string(g->values[i]);
    }
    return out;
  }
  if (const auto* l = std::get_if<LetterAnswer>(&truth)) return std::string(1, l->letter);
  const auto& r = std::get<BoxAnswer>(truth).rect;
  return fmt::format("{},{},{},{}", r.x1, r.y1, r.x2, r.y2);
}

}  // namespace jigsaw
