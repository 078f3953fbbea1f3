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

#include <doctest.h>

#include <map>
#include <set>

#include "fixtures.hpp"
#include "golden.hpp"
#include "jigsaw/core/errors.hpp"
#include "jigsaw/core/harness.hpp"
#include "jigsaw/core/prompting.hpp"
#include "jigsaw/core/taskgen.hpp"
#include "oracles.hpp"

using namespace jigsaw;

TEST_CASE("six 2x2 prompts equal the golden files byte for byte") {
  const auto cases = testing::golden_cases();
  REQUIRE(cases.size() == 6);
  for (const auto& c : cases) {
    INFO(c.name);
    REQUIRE_FALSE(c.expected.empty());
    CHECK(c.question.prompt == c.expected);
    CHECK(c.question.prompt.back() != '\n');
  }
}

TEST_CASE("templates loaded from disk equal the embedded ones") {
  const auto disk = TemplateSet::load_dir(testing::source_dir() / "assets/templates");
  for (auto kind : {TaskKind::kFull, TaskKind::kPair, TaskKind::kBox}) {
    for (auto mode : {PromptMode::kThinking, PromptMode::kNonThinking}) {
      CHECK(disk.get(kind, mode) == TemplateSet::builtin().get(kind, mode));
    }
  }
}

TEST_CASE("substitution rejects unknown placeholders") {
  CHECK(substitute("{m}x{n}", {{"m", "2"}, {"n", "3"}}) == "2x3");
  CHECK_THROWS_AS(substitute("{nope}", {{"m", "2"}}), InvalidArgument);
}

TEST_CASE("grid diagram") {
  CHECK(grid_diagram(GridSpec(2, 3)) == "1 2 3\n4 5 6");
  CHECK(grid_diagram(GridSpec(1, 2)) == "1 2");
}

TEST_CASE("line grid prompts offer two choices") {
  PuzzleInstance inst = make_instance("x", "", GridSpec(1, 3), 4, MaskConfig::none(), false);
  Rng rng(1);
  const auto q = make_pair(inst, PromptMode::kThinking, rng);
  CHECK(q.choices.size() == 2);
  CHECK(q.prompt.find("following 2 choices") != std::string::npos);
  CHECK(q.prompt.find("(C)") == std::string::npos);
}

TEST_CASE("full ground truth is the permutation") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = make_instance("f", "", GridSpec(3, 2), seed, MaskConfig::none(), true);
    const auto q = make_full(inst, PromptMode::kNonThinking);
    const auto& truth = std::get<GridAnswer>(q.truth).values;
    REQUIRE(truth.size() == 6);
    for (int x = 1; x <= 6; ++x) CHECK(truth[static_cast<std::size_t>(x - 1)] == inst.perm[x]);
    CHECK(q.grid == inst.grid);
  }
}

TEST_CASE("pair ground truth matches the coordinate oracle") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const GridSpec g = seed % 3 == 0 ? GridSpec(2, 2) : (seed % 3 == 1 ? GridSpec(3, 3) : GridSpec(4, 1));
    const auto inst = make_instance("p", "", g, seed, MaskConfig::none(), false);
    Rng rng(seed, Stream::kPair);
    const auto q = make_pair(inst, PromptMode::kThinking, rng);
    const auto [x, y] = *q.meta.pair_positions;
    CHECK(x != y);
    const char letter = std::get<LetterAnswer>(q.truth).letter;
    const auto& choice = q.choices[static_cast<std::size_t>(letter - 'A')];
    CHECK(choice.text == std::to_string(x) + " is " + oracle::direction_phrase(inst.perm[x], inst.perm[y], g.cols()) +
                             " " + std::to_string(y));
    std::set<Direction> distinct;
    for (const auto& c : q.choices) distinct.insert(c.direction);
    CHECK(distinct.size() == q.choices.size());
  }
}

TEST_CASE("pair option order is uniform") {
  // Each direction should sit at each letter about 1/8 of the time.
  std::map<std::pair<int, int>, int> hits;
  const int n = 16000;
  const auto inst = make_instance("p", "", GridSpec(2, 2), 3, MaskConfig::none(), false);
  Rng rng(77);
  for (int i = 0; i < n; ++i) {
    const auto q = make_pair(inst, PromptMode::kThinking, rng);
    for (std::size_t k = 0; k < q.choices.size(); ++k) ++hits[{static_cast<int>(k), static_cast<int>(q.choices[k].direction)}];
  }
  double chi2 = 0.0;
  for (const auto& [key, c] : hits) chi2 += (c - n / 8.0) * (c - n / 8.0) / (n / 8.0);
  CHECK(hits.size() == 64);
  CHECK(chi2 < 110.0);  // 49 dof, far tail
}

TEST_CASE("deterministic pair overload validates its input") {
  const auto inst = make_instance("p", "", GridSpec(2, 2), 3, MaskConfig::none(), false);
  const std::vector<Direction> two{Direction::kLeft, Direction::kRight};
  CHECK_THROWS_AS(make_pair(inst, PromptMode::kThinking, 1, 1, two), InvalidArgument);
  CHECK_THROWS_AS(make_pair(inst, PromptMode::kThinking, 1, 2, two), InvalidArgument);
}

TEST_CASE("box ground truth follows the swap under both readings") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const GridSpec g(2, 2);
    const int target = static_cast<int>(seed % 4) + 1;
    const auto a = make_box(200, 160, g, target, 0.5, seed, PromptMode::kThinking);
    const auto b = make_box(200, 160, g, target, 0.5, seed, PromptMode::kThinking, BoxSemantics::kTargetPatchLocation);
    const auto& box = a.box;
    CHECK(box.swap_perm[target] != target);
    CHECK(box.swap_perm.inverse()[target] != target);
    for (int i = 1; i <= 4; ++i) {
      const auto& region = box.region_rects[static_cast<std::size_t>(i - 1)];
      const auto& patch = box.patch_rects[static_cast<std::size_t>(i - 1)];
      CHECK(patch.inside(region));
      CHECK(patch.width() == 50);
      CHECK(patch.height() == 40);
    }
    CHECK(std::get<BoxAnswer>(a.question.truth).rect == box.patch_rects[static_cast<std::size_t>(box.swap_perm[target] - 1)]);
    CHECK(std::get<BoxAnswer>(b.question.truth).rect ==
          box.patch_rects[static_cast<std::size_t>(box.swap_perm.inverse()[target] - 1)]);
    CHECK(a.box.patch_rects == b.box.patch_rects);
  }
}

TEST_CASE("box rejects bad patch scales") {
  CHECK_THROWS_AS(make_box(100, 100, GridSpec(2, 2), 1, 0.0, 1, PromptMode::kThinking), InvalidInput);
  CHECK_THROWS_AS(make_box(100, 100, GridSpec(2, 2), 1, 1.5, 1, PromptMode::kThinking), InvalidInput);
  CHECK_THROWS_AS(make_box(4, 4, GridSpec(2, 2), 1, 0.1, 1, PromptMode::kThinking), InvalidInput);
  CHECK_NOTHROW(make_box(100, 100, GridSpec(2, 2), 1, 1.0, 1, PromptMode::kThinking));
}

TEST_CASE("rendered puzzle unshuffles to the trimmed source, transposed or not") {
  const auto src = testing::noise_image(91, 67, 8);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    PuzzleInstance inst = make_instance("r", "", GridSpec(3, 2), seed, MaskConfig::with_gap(2), true);
    const auto out = render_puzzle(src, inst);
    const auto back = unshuffle(out, inst.perm, inst.grid, inst.mask);
    auto trimmed = trim_to_grid(src, inst.source_grid);
    if (inst.transposed) {
      // Patch (r, c) of the source sits at (c, r) of the un-shuffled layout.
      const int pw = inst.patch_width;
      const int ph = inst.patch_height;
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 2; ++c) {
          CHECK(back.crop({r * pw, c * ph, r * pw + pw, c * ph + ph}) ==
                trimmed.crop({c * pw, r * ph, c * pw + pw, r * ph + ph}));
        }
      }
    } else {
      CHECK(back == trimmed);
    }
  }
}

TEST_CASE("regeneration from metadata reproduces the question") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    for (auto kind : {TaskKind::kFull, TaskKind::kPair, TaskKind::kBox}) {
      const auto q = make_synthetic_question(kind, seed % 2 ? PromptMode::kThinking : PromptMode::kNonThinking,
                                             seed % 3 ? GridSpec(2, 2) : GridSpec(3, 1), seed);
      CHECK(regenerate_question(q) == q);
    }
  }
}
