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

#include <fstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "jigsaw/core/prompting.hpp"
#include "jigsaw/core/taskgen.hpp"

namespace testing {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct GoldenCase {
  std::string name;
  jigsaw::Question question;
  std::string expected;
};

// The six 2x2 example prompts: full, pair (patches 3 and 2 with the example
// option order) and box (region 4), each in both modes.
inline std::vector<GoldenCase> golden_cases() {
  using namespace jigsaw;
  std::vector<GoldenCase> out;
  const GridSpec g(2, 2);
  PuzzleInstance inst = make_instance("golden", "", g, 1, MaskConfig::none(), false);
  const std::vector<Direction> order{Direction::kUpperRight, Direction::kLowerLeft, Direction::kUpperLeft,
                                     Direction::kRight,      Direction::kBelow,     Direction::kAbove,
                                     Direction::kLeft,       Direction::kLowerRight};
  for (auto mode : {PromptMode::kThinking, PromptMode::kNonThinking}) {
    const std::string suffix = mode == PromptMode::kThinking ? "think" : "nothink";
    const auto dir = source_dir() / "tests/fixtures/golden_prompts";
    out.push_back({"full_" + suffix, make_full(inst, mode), read_file(dir / ("full_" + suffix + "_2x2.txt"))});
    out.push_back({"pair_" + suffix, make_pair(inst, mode, 3, 2, order), read_file(dir / ("pair_" + suffix + "_2x2.txt"))});
    out.push_back({"box_" + suffix, make_box(448, 448, g, 4, 0.5, 1, mode).question,
                   read_file(dir / ("box_" + suffix + "_2x2.txt"))});
  }
  return out;
}

}  // namespace testing
