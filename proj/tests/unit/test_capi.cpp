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

#include <string>

#include "fixtures.hpp"
#include "jigsaw/core/harness.hpp"
#include "jigsaw/core/json_codec.hpp"
#include "jigsaw/jigsaw.h"
#include "jigsaw/version.hpp"

using jigsaw::codec::Json;

namespace {

struct Str {
  char* p = nullptr;
  ~Str() { jgs_free(p); }
};

}  // namespace

TEST_CASE("status codes and last error") {
  CHECK(std::string(jgs_version()) == jigsaw::kVersion);
  jgs_manifest* m = nullptr;
  CHECK(jgs_manifest_load("/nonexistent/manifest.jsonl", &m) == JGS_IO_ERROR);
  CHECK(std::string(jgs_last_error()).find("cannot open") != std::string::npos);
  CHECK(jgs_manifest_load(nullptr, &m) == JGS_INVALID_ARGUMENT);
  Str out;
  CHECK(jgs_generate(R"({"corpus":"/x","out":"/y","grid":"1x1"})", &out.p) == JGS_CONFIG_ERROR);
  CHECK(jgs_generate("not json", &out.p) == JGS_INVALID_ARGUMENT);
  CHECK(jgs_generate(R"({"corpus":"/nonexistent","out":"/tmp/x"})", &out.p) == JGS_IO_ERROR);
  CHECK(jgs_learning_signal_json(R"({"groups":[{"rewards":[1,0]}]})", &out.p, nullptr) == JGS_OK);
  CHECK(std::string(jgs_last_error()).empty());
}

TEST_CASE("generate, load, score through the C API") {
  testing::TempDir tmp("capi");
  std::filesystem::create_directories(tmp.path() / "c");
  jigsaw::save_png(testing::noise_image(80, 60, 1), tmp.path() / "c/a.png");
  const Json cfg{{"corpus", (tmp.path() / "c").string()}, {"out", (tmp.path() / "o").string()},
                 {"kind", {"full", "box"}}, {"grid", "2x2"}, {"count", 5}, {"seed", 1}};
  Str report;
  REQUIRE(jgs_generate(cfg.dump().c_str(), &report.p) == JGS_OK);
  CHECK(Json::parse(report.p).at("records") == 10);

  jgs_manifest* m = nullptr;
  REQUIRE(jgs_manifest_load((tmp.path() / "o/manifest.jsonl").c_str(), &m) == JGS_OK);
  CHECK(jgs_manifest_size(m) == 10);
  Str rec;
  REQUIRE(jgs_manifest_record(m, 0, &rec.p) == JGS_OK);
  CHECK(jgs_manifest_record(m, 10, &rec.p) == JGS_NOT_FOUND);

  const auto manifest = jigsaw::load_manifest(tmp.path() / "o/manifest.jsonl");
  std::vector<jigsaw::Response> rs;
  for (const auto& q : manifest.records) rs.push_back({q.id, jigsaw::oracle_agent(q), std::nullopt});
  jigsaw::save_responses(rs, tmp.path() / "r.jsonl");
  Str records, summary;
  REQUIRE(jgs_score(m, (tmp.path() / "r.jsonl").c_str(), &records.p, &summary.p) == JGS_OK);
  CHECK(Json::parse(summary.p).at("mean_total") == 1.5);

  Str reply;
  int status = 0;
  const Json req{{"items", {{{"question_id", manifest.records[0].id}, {"raw_text", "nope"}}}}};
  REQUIRE(jgs_score_json(m, req.dump().c_str(), &reply.p, &status) == JGS_OK);
  CHECK(status == 200);
  CHECK(Json::parse(reply.p).at("results")[0].at("reward").at("total") == 0.0);
  jgs_manifest_free(m);
}
