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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "jigsaw/core/puzzle.hpp"
#include "jigsaw/core/question.hpp"

namespace jigsaw {

/// The six prompt templates, keyed "<kind>_<think|nothink>". Placeholders
/// are written {name}; see assets/templates for the available names.
class TemplateSet {
 public:
  /// Templates compiled in from assets/templates.
  static const TemplateSet& builtin();
  /// Loads <dir>/<kind>_<mode>.txt for all six combinations. Throws IoError.
  static TemplateSet load_dir(const std::filesystem::path& dir);

  const std::string& get(TaskKind kind, PromptMode mode) const;

 private:
  std::map<std::string, std::string, std::less<>> templates_;
};

/// Replaces every {name} with values.at(name). Throws InvalidArgument on an
/// unknown or unterminated placeholder.
std::string substitute(std::string_view text, const std::map<std::string, std::string, std::less<>>& values);

/// "1 2\n3 4" for 2x2.
std::string grid_diagram(const GridSpec& grid);

/// "3 is on the lower left of 2".
std::string direction_sentence(int x, Direction d, int y);

/// "(A) ...\n(B) ..." in stored order.
std::string choice_block(const std::vector<PairChoice>& choices);

/// Deterministic prompt text, canonical "\n" newlines, no trailing newline.
std::string render(const Question& question, const TemplateSet& templates = TemplateSet::builtin());

}  // namespace jigsaw
