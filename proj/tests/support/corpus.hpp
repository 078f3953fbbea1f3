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

// Seeded synthetic model outputs for parser agreement checks, and a helper
// that compares the library parser with the pattern oracle on one sample.

#include <string>
#include <vector>

#include "jigsaw/core/parsing.hpp"
#include "jigsaw/core/rng.hpp"
#include "oracles.hpp"

namespace testing {

struct ParseSample {
  std::string raw;
  jigsaw::PromptMode mode;
  jigsaw::AnswerSchema schema;
  jigsaw::GridSpec grid{2, 2};
  int num_choices = 8;
};

namespace detail {

inline std::string pick(jigsaw::Rng& rng, const std::vector<std::string>& xs) {
  return xs[static_cast<std::size_t>(rng.below(xs.size()))];
}

inline std::string grid_text(jigsaw::Rng& rng, int m, int n) {
  const std::string style = pick(rng, {"plain", "comma", "bracket", "tabs", "nested"});
  std::string out;
  if (style == "nested") out += "[";
  for (int r = 0; r < m; ++r) {
    if (r) out += style == "nested" ? ",\n" : "\n";
    if (style == "bracket" || style == "nested") out += "[";
    for (int c = 0; c < n; ++c) {
      if (c) out += style == "comma" || style == "bracket" || style == "nested" ? ", " : (style == "tabs" ? "\t" : " ");
      out += std::to_string(1 + rng.below(static_cast<std::uint64_t>(m * n)));
    }
    if (style == "bracket" || style == "nested") out += "]";
  }
  if (style == "nested") out += "]";
  return out;
}

inline std::string letter_text(jigsaw::Rng& rng, int k) {
  const char l = static_cast<char>((rng.coin() ? 'A' : 'a') + rng.below(static_cast<std::uint64_t>(k)));
  const std::string s(1, l);
  return pick(rng, {s, "(" + s + ")", "Answer: " + s, "The answer is " + s + ".", s + ") because",
                    "I'd pick " + s, "Option " + s + " is right", "**" + s + "**", "I think it's " + s});
}

inline std::string box_text(jigsaw::Rng& rng) {
  auto v = [&] { return std::to_string(rng.below(500)); };
  const std::string a = v(), b = v(), c = v(), d = v();
  return pick(rng, {a + "," + b + "," + c + "," + d, a + ", " + b + ", " + c + ", " + d,
                    "[" + a + ", " + b + ", " + c + ", " + d + "]", "(" + a + "," + b + "," + c + "," + d + ")",
                    "box: " + a + " , " + b + " , " + c + " , " + d, "7, " + a + ", " + b + ", " + c + ", " + d,
                    a + "," + b + "," + c + "," + d + ".5", a + "," + b + "," + c + "px," + d,
                    "x1=" + a + ", y1=" + b + ", x2=" + c + ", y2=" + d, a + "," + b + "," + c + "," + d + ",-" + v(),
                    a + ", " + b + "\n" + c + ", " + d});
}

inline std::string noise(jigsaw::Rng& rng) {
  return pick(rng, {"", "Let me look at the edges.", "Patch 3 seems to be the sky, so 1 2 might go first.",
                    "Checking 4, 3, 2, 1 ordering", "Hmm, B or C?", "I'll reexamine: 12,40,50,90 was wrong.",
                    "The cat's tail continues across.", "Top row: 2 1\nBottom row: 4 3", "a b c d"});
}

}  // namespace detail

inline std::vector<ParseSample> parse_corpus(std::size_t count = 200, std::uint64_t seed = 2024) {
  using namespace jigsaw;
  Rng rng(seed);
  const std::vector<GridSpec> grids{GridSpec(2, 1), GridSpec(1, 3), GridSpec(2, 2), GridSpec(3, 3), GridSpec(4, 1)};
  std::vector<ParseSample> out;
  for (std::size_t i = 0; i < count; ++i) {
    ParseSample s;
    s.mode = rng.coin() ? PromptMode::kThinking : PromptMode::kNonThinking;
    s.schema = static_cast<AnswerSchema>(i % 3);
    s.grid = grids[static_cast<std::size_t>(rng.below(grids.size()))];
    s.num_choices = s.grid.is_line() ? 2 : 8;
    std::string answer;
    switch (s.schema) {
      case AnswerSchema::kGrid: answer = detail::grid_text(rng, s.grid.rows(), s.grid.cols()); break;
      case AnswerSchema::kLetter: answer = detail::letter_text(rng, s.num_choices); break;
      case AnswerSchema::kBbox: answer = detail::box_text(rng); break;
    }
    const std::string think = detail::noise(rng);
    switch (rng.below(7)) {
      case 0: s.raw = "<think>\n" + think + "\n</think>\n<answer>\n" + answer + "\n</answer>"; break;
      case 1: s.raw = "<think>" + think + "</think><answer>" + answer + "</answer>"; break;
      case 2: s.raw = answer; break;
      case 3: s.raw = think + "\n" + answer; break;
      case 4:
        s.raw = "<think>" + think + "</think>\n<answer>" + detail::noise(rng) + "</answer>\n<answer>" + answer +
                "</answer>";
        break;
      case 5: s.raw = "<answer>" + answer + "</answer><think>" + think + "</think>"; break;
      default: s.raw = "<think>" + think + "\n<answer>" + answer; break;
    }
    out.push_back(std::move(s));
  }
  return out;
}

// True when the library and the pattern oracle agree on tags and payload.
inline bool parser_agrees(const ParseSample& s) {
  using namespace jigsaw;
  const auto got = parse_response(s.raw, s.mode, s.schema, s.grid, s.num_choices);
  const bool thinking = s.mode == PromptMode::kThinking;
  if (got.tags.correct_order != oracle::tags_in_order(s.raw)) return false;
  const auto region = oracle::answer_region(s.raw, thinking);
  if (!region) return !parsed(got.payload);
  switch (s.schema) {
    case AnswerSchema::kGrid: {
      const auto want = oracle::grid(*region, s.grid.rows(), s.grid.cols());
      const auto* g = std::get_if<GridAnswer>(&got.payload);
      if (!want) return g == nullptr;
      return g != nullptr && std::vector<long long>(g->values.begin(), g->values.end()) == *want;
    }
    case AnswerSchema::kLetter: {
      const auto want = oracle::letter(*region, s.num_choices);
      const auto* l = std::get_if<LetterAnswer>(&got.payload);
      if (!want) return l == nullptr;
      return l != nullptr && l->letter == *want;
    }
    case AnswerSchema::kBbox: {
      const auto want = oracle::bbox(*region);
      const auto* b = std::get_if<BoxAnswer>(&got.payload);
      if (!want) return b == nullptr;
      return b != nullptr && std::vector<long long>{b->rect.x1, b->rect.y1, b->rect.x2, b->rect.y2} == *want;
    }
  }
  return false;
}

}  // namespace testing
