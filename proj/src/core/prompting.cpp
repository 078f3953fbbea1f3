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

#include "jigsaw/core/prompting.hpp"

#include <fstream>
#include <iterator>
#include <sstream>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "jigsaw/core/errors.hpp"

namespace jigsaw {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& builtin_template_sources();
}

namespace {

std::string template_key(TaskKind kind, PromptMode mode) {
  return fmt::format("{}_{}", to_string(kind), to_string(mode));
}

// Asset files end with one newline; prompts do not.
std::string canonicalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') continue;
      out += '\n';
      continue;
    }
    out += text[i];
  }
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

std::string_view phrase(Direction d) noexcept {
  switch (d) {
    case Direction::kUpperLeft: return "on the upper left of";
    case Direction::kAbove: return "directly above";
    case Direction::kUpperRight: return "on the upper right of";
    case Direction::kLeft: return "directly to the left of";
    case Direction::kRight: return "directly to the right of";
    case Direction::kLowerLeft: return "on the lower left of";
    case Direction::kBelow: return "directly below";
    case Direction::kLowerRight: return "on the lower right of";
  }
  return "?";
}

}  // namespace

const TemplateSet& TemplateSet::builtin() {
  static const TemplateSet set = [] {
    TemplateSet s;
    for (const auto& [name, body] : detail::builtin_template_sources()) {
      s.templates_.emplace(std::string(name), canonicalize(body));
    }
    return s;
  }();
  return set;
}

TemplateSet TemplateSet::load_dir(const std::filesystem::path& dir) {
  TemplateSet s;
  for (TaskKind kind : {TaskKind::kFull, TaskKind::kPair, TaskKind::kBox}) {
    for (PromptMode mode : {PromptMode::kThinking, PromptMode::kNonThinking}) {
      const auto key = template_key(kind, mode);
      const auto path = dir / (key + ".txt");
      std::ifstream in(path, std::ios::binary);
      if (!in) throw IoError(fmt::format("missing prompt template '{}'", path.string()));
      const std::string body{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
      s.templates_.emplace(key, canonicalize(body));
    }
  }
  return s;
}

const std::string& TemplateSet::get(TaskKind kind, PromptMode mode) const {
  const auto it = templates_.find(template_key(kind, mode));
  if (it == templates_.end()) throw NotFound(fmt::format("no template '{}'", template_key(kind, mode)));
  return it->second;
}

std::string substitute(std::string_view text, const std::map<std::string, std::string, std::less<>>& values) {
  std::string out;
  out.reserve(text.size() + 256);
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    out.append(text.substr(pos, open - pos));
    const auto close = text.find('}', open);
    if (close == std::string_view::npos) throw InvalidArgument("unterminated template placeholder");
    const auto name = text.substr(open + 1, close - open - 1);
    const auto it = values.find(name);
    if (it == values.end()) throw InvalidArgument(fmt::format("unknown template placeholder '{{{}}}'", name));
    out.append(it->second);
    pos = close + 1;
  }
  return out;
}

std::string grid_diagram(const GridSpec& grid) {
  std::string out;
  for (int p = 1; p <= grid.piece_count(); ++p) {
    if (p > 1) out += (grid.col_of(p) == 1) ? '\n' : ' ';
    out += std::to_string(p);
  }
  return out;
}

std::string direction_sentence(int x, Direction d, int y) { return fmt::format("{} is {} {}", x, phrase(d), y); }

std::string choice_block(const std::vector<PairChoice>& choices) {
  std::string out;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    if (i > 0) out += '\n';
    out += fmt::format("({}) {}", choices[i].letter, choices[i].text);
  }
  return out;
}

std::string render(const Question& question, const TemplateSet& templates) {
  const GridSpec& grid = question.grid;
  std::map<std::string, std::string, std::less<>> values = {
      {"m", std::to_string(grid.rows())},
      {"n", std::to_string(grid.cols())},
      {"mn", std::to_string(grid.piece_count())},
      {"grid_diagram", grid_diagram(grid)},
  };
  switch (question.kind) {
    case TaskKind::kFull:
      break;
    case TaskKind::kPair: {
      if (!question.meta.pair_positions) throw InvalidArgument("pair question without positions");
      values["x"] = std::to_string(question.meta.pair_positions->first);
      values["y"] = std::to_string(question.meta.pair_positions->second);
      values["num_choices"] = std::to_string(question.choices.size());
      values["choice_block"] = choice_block(question.choices);
      break;
    }
    case TaskKind::kBox:
      if (!question.meta.target_region) throw InvalidArgument("box question without target region");
      values["target_region"] = std::to_string(*question.meta.target_region);
      break;
  }
  return substitute(templates.get(question.kind, question.mode), values);
}

}  // namespace jigsaw
