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

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>

#include "fixtures.hpp"
#include "golden.hpp"
#include "jigsaw/core/harness.hpp"
#include "jigsaw/core/json_codec.hpp"

using namespace jigsaw;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(JIGSAW_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = testing::read_file(e.path());
  }
  return out;
}

fs::path corpus(const fs::path& dir) {
  fs::create_directories(dir);
  for (int i = 0; i < 3; ++i) save_png(testing::noise_image(48 + i, 40, static_cast<std::uint64_t>(i)), dir / ("i" + std::to_string(i) + ".png"));
  return dir;
}

}  // namespace

TEST_CASE("generate is byte-stable and rejects bad configs") {
  testing::TempDir tmp("cli");
  const auto c = corpus(tmp.path() / "c").string();
  const std::string base = "generate --corpus " + c + " --grid 2x1 --kind pair --count 50 --seed 7 --out ";
  CHECK(run(base + (tmp.path() / "a").string()).code == 0);
  CHECK(run(base + (tmp.path() / "b").string() + " --jobs 3").code == 0);
  CHECK(tree(tmp.path() / "a") == tree(tmp.path() / "b"));

  CHECK(run("generate --corpus " + c + " --grid 1x1 --out " + (tmp.path() / "x").string()).code == 2);
  CHECK(run("generate --corpus " + c + " --kind maze --out " + (tmp.path() / "x").string()).code == 2);
  CHECK(run("generate --corpus /nonexistent --out " + (tmp.path() / "x").string()).code == 3);
  CHECK(run("bogus").code == 2);

  // Environment variables stand in for flags.
  setenv("JIGSAW_GRID", "1x1", 1);
  CHECK(run("generate --corpus " + c + " --out " + (tmp.path() / "env").string()).code == 2);
  unsetenv("JIGSAW_GRID");
}

TEST_CASE("curriculum mix") {
  testing::TempDir tmp("mix");
  const auto c = corpus(tmp.path() / "c").string();
  const auto out = tmp.path() / "m";
  REQUIRE(run("generate --corpus " + c + " --mix 3x1:0.5,4x1:0.5 --kind pair --count 10 --out " + out.string()).code == 0);
  const auto m = load_manifest(out / "manifest.jsonl");
  int three = 0;
  for (const auto& q : m.records) three += q.grid == GridSpec(3, 1);
  CHECK(three == 5);
  CHECK(m.records.size() == 10);
}

TEST_CASE("score, eval and analyze") {
  testing::TempDir tmp("cli2");
  const auto c = corpus(tmp.path() / "c").string();
  const auto out = tmp.path() / "ds";
  REQUIRE(run("generate --corpus " + c + " --grid 2x1 --kind pair --mode nothink --count 10000 --seed 3 --jobs 8 --out " +
              out.string())
              .code == 0);
  const auto m = load_manifest(out / "manifest.jsonl");
  std::vector<Response> oracle_rs;
  std::vector<Response> random_rs;
  Rng rng(42, Stream::kAgent);
  for (const auto& q : m.records) {
    oracle_rs.push_back({q.id, oracle_agent(q), std::nullopt});
    random_rs.push_back({q.id, random_agent(q, rng), std::nullopt});
  }
  save_responses(oracle_rs, tmp.path() / "oracle.jsonl");
  save_responses(random_rs, tmp.path() / "random.jsonl");

  const auto s = run("score --manifest " + (out / "manifest.jsonl").string() + " --responses " +
                     (tmp.path() / "oracle.jsonl").string() + " --out " + (tmp.path() / "rec.jsonl").string());
  CHECK(s.code == 0);
  CHECK(s.out.find("mean_total=1.5\n") != std::string::npos);
  CHECK(fs::file_size(tmp.path() / "rec.jsonl") > 0);

  const auto e = run("eval --manifest " + (out / "manifest.jsonl").string() + " --responses " +
                     (tmp.path() / "random.jsonl").string() + " --table " + (tmp.path() / "t.json").string());
  CHECK(e.code == 0);
  const auto table = codec::Json::parse(testing::read_file(tmp.path() / "t.json"));
  const double pct = table[0].at("cells").at("2x1").at("percent").get<double>();
  CHECK(pct == doctest::Approx(50.0).epsilon(0.03));
  CHECK(e.out.find("2x1") != std::string::npos);

  CHECK(run("score --manifest /nonexistent --responses x").code == 3);

  const auto a = run("analyze --keywords-default --alpha 0.5 --responses " +
                     (testing::source_dir() / "tests/fixtures/analysis_responses.jsonl").string() + " --out " +
                     (tmp.path() / "an.json").string());
  CHECK(a.code == 0);
  const auto an = codec::Json::parse(testing::read_file(tmp.path() / "an.json"));
  CHECK(an.at("series").at("backtracking") == codec::Json::array({1.0, 1.0, 3.0}));
  CHECK(run("analyze --alpha 2 --responses " + (testing::source_dir() / "tests/fixtures/analysis_responses.jsonl").string()).code == 2);
}
