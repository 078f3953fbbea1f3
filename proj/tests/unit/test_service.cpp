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

#include <thread>

#include <httplib.h>

#include "fixtures.hpp"
#include "jigsaw/core/harness.hpp"
#include "jigsaw/core/json_codec.hpp"
#include "jigsaw/core/service.hpp"
#include "jigsaw/version.hpp"

using namespace jigsaw;
using codec::Json;
namespace fs = std::filesystem;

namespace {

service::Config quiet() {
  service::Config c;
  c.log_requests = false;
  c.port = 0;
  return c;
}

Manifest small_manifest() {
  Manifest m;
  for (std::uint64_t s = 0; s < 9; ++s) {
    auto q = make_synthetic_question(static_cast<TaskKind>(s % 3), s % 2 ? PromptMode::kThinking : PromptMode::kNonThinking,
                                     GridSpec(2, 2), s);
    q.id = "q" + std::to_string(s);
    m.records.push_back(q);
  }
  return m;
}

// Server on an ephemeral port, stopped on destruction.
struct Running {
  explicit Running(service::Service& s) : svc(s), port(s.bind()), thread([this] { svc.run(); }) {}
  ~Running() {
    svc.stop();
    thread.join();
  }
  service::Service& svc;
  int port;
  std::thread thread;
};

}  // namespace

TEST_CASE("health on an empty server has no digest") {
  service::Service s(quiet());
  const auto r = s.health();
  CHECK(r.status == 200);
  const auto j = Json::parse(r.body);
  CHECK(j.at("version") == kVersion);
  CHECK_FALSE(j.contains("manifest_digest"));
}

TEST_CASE("score by id and inline equals library scoring") {
  testing::TempDir tmp("svc");
  const auto m = small_manifest();
  save_manifest(m, tmp.path() / "m.jsonl");
  service::Service s(quiet());
  s.load_manifest(tmp.path() / "m.jsonl");
  CHECK(Json::parse(s.health().body).at("manifest_digest") == service::file_digest(tmp.path() / "m.jsonl"));

  Json items = Json::array();
  for (const auto& q : m.records) {
    items.push_back({{"question_id", q.id}, {"raw_text", oracle_agent(q)}});
    items.push_back({{"question", {{"kind", std::string(to_string(q.kind))},
                                   {"mode", std::string(to_string(q.mode))},
                                   {"grid", q.grid.to_string()},
                                   {"ground_truth", codec::truth_to_json(q.truth, q.grid)}}},
                     {"raw_text", "garbage"}});
  }
  const auto r = s.score(Json{{"items", items}}.dump());
  REQUIRE(r.status == 200);
  const auto res = Json::parse(r.body).at("results");
  REQUIRE(res.size() == 2 * m.records.size());
  for (std::size_t i = 0; i < m.records.size(); ++i) {
    const auto& q = m.records[i];
    const auto local = score_response(q, oracle_agent(q));
    CHECK(res[2 * i].at("reward").at("total").get<double>() == local.reward.total);
    CHECK(res[2 * i].at("reward").at("total").get<double>() == 1.5);
    CHECK(res[2 * i].at("question_id") == q.id);
    CHECK(res[2 * i + 1].at("reward").at("total").get<double>() == 0.0);
    CHECK(res[2 * i + 1].at("parsed") == "unparseable");
  }
  CHECK(s.score(Json{{"items", items}}.dump()).body == r.body);
}

TEST_CASE("score errors") {
  service::Config c = quiet();
  c.batch_cap = 2;
  service::Service s(c);
  CHECK(s.score("{").status == 400);
  CHECK(s.score("[]").status == 400);
  CHECK(s.score(R"({"items":[{"raw_text":"x"}]})").status == 400);
  CHECK(s.score(R"({"items":[{"question_id":"nope","raw_text":"x"}]})").status == 404);
  CHECK(s.score(R"({"items":[{"question":{"kind":"full","mode":"think","grid":"1x1","ground_truth":[1]},"raw_text":"x"}]})")
            .status == 400);
  CHECK(s.score(R"({"items":[{"raw_text":"a"},{"raw_text":"b"},{"raw_text":"c"}]})").status == 413);
}

TEST_CASE("learning signal") {
  service::Service s(quiet());
  const auto r = s.learning_signal(R"({"groups":[{"rewards":[1,0]},{"rewards":[0.5,0.5]}]})");
  REQUIRE(r.status == 200);
  const auto g = Json::parse(r.body).at("groups");
  CHECK(g[0].at("advantages")[0].get<double>() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(g[0].at("advantages")[1].get<double>() == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(g[1].at("advantages")[0].get<double>() == 0.0);
  CHECK(s.learning_signal(R"({"groups":[{"rewards":[1,0]},{"rewards":[1,0,1]}]})").status == 400);
  CHECK(s.learning_signal(R"({"groups":[{"rewards":[1,0]}],"config":{"group_size":8}})").status == 400);
  CHECK(s.learning_signal(R"({"groups":[]})").status == 400);

  // Objective echo equals the kernel bit for bit.
  const std::string body =
      R"({"groups":[{"rewards":[1,0],"samples":[{"current":[-1.1,-2.0],"old":[-1.0,-2.1],"ref":[-1.2,-1.9]},)"
      R"({"current":[-0.3],"old":[-0.35],"ref":[-0.31],"mask":[1]}]}],"config":{"kl_coeff":0.04}})";
  const auto lr = s.learning_signal(body);
  REQUIRE(lr.status == 200);
  grpo::Config cfg;
  cfg.group_size = 2;
  grpo::RolloutGroup grp{{1, 0}, {{{-1.1, -2.0}, {-1.0, -2.1}, {-1.2, -1.9}, {}}, {{-0.3}, {-0.35}, {-0.31}, {1}}}};
  const auto adv = grpo::group_advantages(grp.rewards, cfg);
  const auto obj = grpo::objective(grp, adv, cfg);
  const auto out = Json::parse(lr.body).at("groups")[0];
  CHECK(out.at("loss").get<double>() == obj.loss);
  CHECK(out.at("grad").get<std::vector<std::vector<double>>>() == obj.grad);
}

TEST_CASE("datasets and instances over HTTP") {
  testing::TempDir tmp("svcds");
  fs::create_directories(tmp.path() / "corpus");
  save_png(testing::noise_image(64, 48, 3), tmp.path() / "corpus/a.png");
  service::Config c = quiet();
  c.data_root = tmp.path() / "root";
  c.token = "sesame";
  service::Service s(c);
  Running run(s);
  httplib::Client cli("127.0.0.1", run.port);
  const httplib::Headers auth{{service::kTokenHeader, "sesame"}};

  const Json req{{"dataset_id", "d1"},   {"corpus", (tmp.path() / "corpus").string()},
                 {"kind", "pair"},       {"grid", "2x2"},
                 {"count", 4},           {"seed", 3}};
  CHECK(cli.Post("/v1/datasets", req.dump(), "application/json")->status == 401);
  auto r = cli.Post("/v1/datasets", auth, req.dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == 201);
  CHECK(cli.Post("/v1/datasets", auth, req.dump(), "application/json")->status == 409);

  // Same config through the library gives the same prompt.
  DatasetConfig cfg = codec::dataset_config_from_json(
      Json{{"corpus", (tmp.path() / "corpus").string()}, {"out", (tmp.path() / "local").string()},
           {"kind", "pair"}, {"grid", "2x2"}, {"count", 4}, {"seed", 3}});
  const auto local = build_dataset(cfg);
  const auto& first = local.manifest.records[0];
  r = cli.Get("/v1/instances/" + first.id, auth);
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(Json::parse(r->body).at("prompt") == first.prompt);
  CHECK(cli.Get("/v1/instances/unknown", auth)->status == 404);
  CHECK(cli.Get("/health")->status == 200);

  const Json score{{"items", {{{"question_id", first.id}, {"raw_text", oracle_agent(first)}}}}};
  r = cli.Post("/v1/score", auth, score.dump(), "application/json");
  REQUIRE(r);
  CHECK(Json::parse(r->body).at("results")[0].at("reward").at("total") == 1.5);
}

TEST_CASE("concurrent identical requests get identical replies") {
  const auto m = small_manifest();
  testing::TempDir tmp("conc");
  save_manifest(m, tmp.path() / "m.jsonl");
  service::Service s(quiet());
  s.load_manifest(tmp.path() / "m.jsonl");
  Running run(s);
  Json items = Json::array();
  for (const auto& q : m.records) items.push_back({{"question_id", q.id}, {"raw_text", oracle_agent(q)}});
  const std::string body = Json{{"items", items}}.dump();
  std::vector<std::string> replies(8);
  std::vector<std::thread> ts;
  for (int i = 0; i < 8; ++i) {
    ts.emplace_back([&, i] {
      httplib::Client cli("127.0.0.1", run.port);
      auto r = cli.Post("/v1/score", body, "application/json");
      if (r) replies[static_cast<std::size_t>(i)] = r->body;
    });
  }
  for (auto& t : ts) t.join();
  for (const auto& r : replies) CHECK(r == replies[0]);
  CHECK_FALSE(replies[0].empty());
}
