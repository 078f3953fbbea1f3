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

#include "jigsaw/core/service.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>

#include <fmt/format.h>
#include <httplib.h>
#include <openssl/evp.h>

#include "jigsaw/core/errors.hpp"
#include "jigsaw/core/grpo.hpp"
#include "jigsaw/core/json_codec.hpp"
#include "jigsaw/version.hpp"

namespace jigsaw::service {

namespace fs = std::filesystem;
using codec::Json;

struct Service::State {
  std::map<std::string, std::shared_ptr<const Question>, std::less<>> by_id;
  std::set<std::string> manifest_ids;
  std::set<std::string> datasets;
  std::optional<std::string> digest;
};

struct Service::Http {
  httplib::Server server;
  bool bound = false;
};

namespace {

class HttpError : public std::runtime_error {
 public:
  HttpError(int status, const std::string& what) : std::runtime_error(what), status(status) {}
  int status;
};

Reply json_reply(int status, const Json& j) { return {status, j.dump()}; }

Reply error_reply(int status, std::string_view message) {
  return json_reply(status, Json{{"error", std::string(message)}, {"status", status}});
}

template <class Fn>
Reply guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const HttpError& e) {
    return error_reply(e.status, e.what());
  } catch (const Json::exception& e) {
    return error_reply(400, e.what());
  } catch (const NotFound& e) {
    return error_reply(404, e.what());
  } catch (const Conflict& e) {
    return error_reply(409, e.what());
  } catch (const IoError& e) {
    return error_reply(500, e.what());
  } catch (const Error& e) {
    return error_reply(400, e.what());
  } catch (const std::exception& e) {
    return error_reply(500, e.what());
  }
}

Json parse_body(std::string_view body) {
  Json j = Json::parse(body.begin(), body.end(), nullptr, false);
  if (j.is_discarded()) throw HttpError(400, "request body is not valid JSON");
  if (!j.is_object()) throw HttpError(400, "request body must be a JSON object");
  return j;
}

Json score_item(const EvalRecord& r, const Json& id) {
  Json j;
  j["question_id"] = id;
  j["reward"] = codec::to_json(r.reward);
  j["eval_correct"] = r.eval_correct;
  j["eval_value"] = r.eval_value;
  if (r.iou) j["iou"] = *r.iou;
  j["parsed"] = r.parsed;
  j["tags"] = codec::to_json(r.tags);
  j["completion_chars"] = r.completion_chars;
  j["completion_tokens"] = r.completion_tokens;
  return j;
}

std::vector<double> doubles(const Json& j, const char* what) {
  if (!j.is_array()) throw HttpError(400, fmt::format("'{}' must be an array of numbers", what));
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw HttpError(400, fmt::format("'{}' must be an array of numbers", what));
    out.push_back(v.get<double>());
  }
  return out;
}

grpo::SampleLogprobs sample_from_json(const Json& j) {
  if (!j.is_object()) throw HttpError(400, "each sample must be an object");
  grpo::SampleLogprobs s;
  s.current = doubles(j.at("current"), "current");
  s.old = j.contains("old") ? doubles(j.at("old"), "old") : s.current;
  s.ref = j.contains("ref") ? doubles(j.at("ref"), "ref") : s.current;
  if (j.contains("mask")) {
    for (const auto& m : j.at("mask")) {
      if (m.is_boolean()) {
        s.mask.push_back(m.get<bool>() ? 1 : 0);
      } else if (m.is_number_integer()) {
        s.mask.push_back(m.get<long long>() != 0 ? 1 : 0);
      } else {
        throw HttpError(400, "'mask' entries must be booleans or integers");
      }
    }
  }
  return s;
}

bool valid_dataset_id(std::string_view id) {
  if (id.empty() || id.size() > 128 || id.front() == '.') return false;
  for (char c : id) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) return false;
  }
  return true;
}

thread_local std::chrono::steady_clock::time_point request_start;

}  // namespace

std::string file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw IoError("SHA-256 unavailable");
  char buf[1 << 15];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

Service::Service(Config config) : config_(std::move(config)), state_(std::make_shared<State>()) {
  if (config_.batch_cap < 1) throw ConfigError("batch cap must be at least 1");
  if (config_.port < 0 || config_.port > 65535) throw ConfigError(fmt::format("port {} out of range", config_.port));
}

Service::~Service() { stop(); }

std::shared_ptr<const Service::State> Service::snapshot() const {
  std::lock_guard lock(mutex_);
  return state_;
}

void Service::load_manifest(const fs::path& path) {
  Manifest m = jigsaw::load_manifest(path);
  const std::string digest = file_digest(path);
  std::lock_guard lock(mutex_);
  auto next = std::make_shared<State>(*state_);
  for (const auto& id : next->manifest_ids) next->by_id.erase(id);
  next->manifest_ids.clear();
  for (auto& q : m.records) {
    if (next->by_id.count(q.id)) throw Conflict(fmt::format("question id '{}' is already served", q.id));
    next->manifest_ids.insert(q.id);
    auto id = q.id;
    next->by_id.emplace(std::move(id), std::make_shared<const Question>(std::move(q)));
  }
  next->digest = digest;
  state_ = std::move(next);
}

Reply Service::health() const {
  const auto s = snapshot();
  Json j{{"status", "ok"}, {"version", kVersion}, {"questions", s->by_id.size()}};
  if (s->digest) j["manifest_digest"] = *s->digest;
  return json_reply(200, j);
}

Reply Service::score(std::string_view body) const {
  return guarded([&] {
    const Json req = parse_body(body);
    if (!req.contains("items") || !req.at("items").is_array()) throw HttpError(400, "'items' must be an array");
    const auto& items = req.at("items");
    if (items.size() > config_.batch_cap) {
      throw HttpError(413, fmt::format("batch of {} exceeds the cap of {}", items.size(), config_.batch_cap));
    }
    const auto state = snapshot();

    std::vector<std::shared_ptr<const Question>> questions;
    questions.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto& item = items[i];
      if (!item.is_object()) throw HttpError(400, fmt::format("item {} is not an object", i));
      if (!item.contains("raw_text") || !item.at("raw_text").is_string()) {
        throw HttpError(400, fmt::format("item {} lacks a string 'raw_text'", i));
      }
      if (item.contains("question_id")) {
        if (!item.at("question_id").is_string()) throw HttpError(400, fmt::format("item {}: bad question_id", i));
        const auto id = item.at("question_id").get<std::string>();
        const auto it = state->by_id.find(id);
        if (it == state->by_id.end()) throw HttpError(404, fmt::format("unknown question_id '{}'", id));
        questions.push_back(it->second);
      } else if (item.contains("question")) {
        try {
          questions.push_back(std::make_shared<const Question>(codec::inline_question_from_json(item.at("question"))));
        } catch (const Error& e) {
          throw HttpError(400, fmt::format("item {}: {}", i, e.what()));
        }
      } else {
        throw HttpError(400, fmt::format("item {} needs question_id or question", i));
      }
    }

    Json results = Json::array();
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto& raw = items[i].at("raw_text").get_ref<const std::string&>();
      const auto record = score_response(*questions[i], raw);
      results.push_back(score_item(record, items[i].contains("question_id") ? items[i].at("question_id") : Json()));
    }
    return json_reply(200, Json{{"results", std::move(results)}});
  });
}

Reply Service::learning_signal(std::string_view body) const {
  return guarded([&] {
    const Json req = parse_body(body);
    if (!req.contains("groups") || !req.at("groups").is_array() || req.at("groups").empty()) {
      throw HttpError(400, "'groups' must be a non-empty array");
    }
    const auto& groups = req.at("groups");
    const Json cfg_json = req.value("config", Json::object());
    if (!cfg_json.is_object()) throw HttpError(400, "'config' must be an object");
    if (!groups[0].is_object() || !groups[0].contains("rewards")) throw HttpError(400, "group 0 lacks 'rewards'");
    int group_size = static_cast<int>(groups[0].at("rewards").size());
    if (cfg_json.contains("group_size")) group_size = cfg_json.at("group_size").get<int>();
    const grpo::Config cfg = codec::grpo_config_from_json(cfg_json, group_size);

    Json out = Json::array();
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const auto& g = groups[gi];
      if (!g.is_object() || !g.contains("rewards")) throw HttpError(400, fmt::format("group {} lacks 'rewards'", gi));
      const auto rewards = doubles(g.at("rewards"), "rewards");
      if (rewards.size() != static_cast<std::size_t>(cfg.group_size)) {
        throw HttpError(400, fmt::format("group {} has {} rewards, expected {}", gi, rewards.size(), cfg.group_size));
      }
      const auto adv = grpo::group_advantages(rewards, cfg);
      Json entry{{"advantages", adv}};
      if (g.contains("samples")) {
        grpo::RolloutGroup rollout;
        rollout.rewards = rewards;
        if (!g.at("samples").is_array()) throw HttpError(400, "'samples' must be an array");
        for (const auto& s : g.at("samples")) rollout.samples.push_back(sample_from_json(s));
        if (rollout.samples.size() != rewards.size()) {
          throw HttpError(400, fmt::format("group {} has {} samples for {} rewards", gi, rollout.samples.size(),
                                           rewards.size()));
        }
        const auto obj = grpo::objective(rollout, adv, cfg);
        entry["loss"] = obj.loss;
        entry["grad"] = obj.grad;
      }
      out.push_back(std::move(entry));
    }
    return json_reply(200, Json{{"groups", std::move(out)}});
  });
}

Reply Service::create_dataset(std::string_view body) {
  return guarded([&] {
    Json req = parse_body(body);
    if (!req.contains("dataset_id") || !req.at("dataset_id").is_string()) {
      throw HttpError(400, "'dataset_id' must be a string");
    }
    const auto dataset_id = req.at("dataset_id").get<std::string>();
    if (!valid_dataset_id(dataset_id)) throw HttpError(400, fmt::format("invalid dataset_id '{}'", dataset_id));
    req.erase("dataset_id");
    if (!req.contains("out")) req["out"] = (config_.data_root / dataset_id).string();
    const DatasetConfig cfg = codec::dataset_config_from_json(req);

    if (snapshot()->datasets.count(dataset_id)) throw Conflict(fmt::format("dataset '{}' already exists", dataset_id));
    BuildResult built = build_dataset(cfg);

    std::lock_guard lock(mutex_);
    if (state_->datasets.count(dataset_id)) throw Conflict(fmt::format("dataset '{}' already exists", dataset_id));
    auto next = std::make_shared<State>(*state_);
    next->datasets.insert(dataset_id);
    for (auto& q : built.manifest.records) {
      if (next->by_id.count(q.id)) {
        throw Conflict(fmt::format("dataset '{}' reuses question id '{}'", dataset_id, q.id));
      }
      auto id = q.id;
      next->by_id.emplace(std::move(id), std::make_shared<const Question>(std::move(q)));
    }
    state_ = std::move(next);
    return json_reply(201, Json{{"dataset_id", dataset_id},
                                {"records", built.manifest.records.size()},
                                {"manifest_path", built.manifest_path.string()},
                                {"skipped", built.skipped.size()}});
  });
}

Reply Service::instance(std::string_view id) const {
  return guarded([&] {
    const auto state = snapshot();
    const auto it = state->by_id.find(id);
    if (it == state->by_id.end()) throw NotFound(fmt::format("unknown instance '{}'", id));
    return json_reply(200, codec::to_json(*it->second));
  });
}

int Service::bind() {
  if (!http_) http_ = std::make_unique<Http>();
  auto& srv = http_->server;
  auto send = [](httplib::Response& res, const Reply& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };

  srv.set_pre_routing_handler([this, send](const httplib::Request& req, httplib::Response& res) {
    request_start = std::chrono::steady_clock::now();
    if (!config_.token.empty() && req.path != "/health" && req.get_header_value(kTokenHeader) != config_.token) {
      send(res, error_reply(401, "missing or wrong token"));
      return httplib::Server::HandlerResponse::Handled;
    }
    return httplib::Server::HandlerResponse::Unhandled;
  });
  srv.Get("/health", [this, send](const httplib::Request&, httplib::Response& res) { send(res, health()); });
  srv.Post("/v1/score",
           [this, send](const httplib::Request& req, httplib::Response& res) { send(res, score(req.body)); });
  srv.Post("/v1/learning-signal", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, learning_signal(req.body));
  });
  srv.Post("/v1/datasets",
           [this, send](const httplib::Request& req, httplib::Response& res) { send(res, create_dataset(req.body)); });
  srv.Get(R"(/v1/instances/(.+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, instance(httplib::detail::decode_url(req.matches[1], false)));
  });
  srv.set_error_handler([send](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send(res, error_reply(res.status, httplib::status_message(res.status)));
  });
  if (config_.log_requests) {
    srv.set_logger([](const httplib::Request& req, const httplib::Response& res) {
      const auto ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - request_start).count();
      const Json line{{"method", req.method}, {"path", req.path},          {"status", res.status},
                      {"ms", ms},             {"bytes_in", req.body.size()}, {"bytes_out", res.body.size()}};
      std::fprintf(stderr, "%s\n", line.dump().c_str());
    });
  }

  int port = config_.port;
  if (port == 0) {
    port = srv.bind_to_any_port(config_.host);
    if (port < 0) throw IoError(fmt::format("cannot bind {}", config_.host));
  } else if (!srv.bind_to_port(config_.host, port)) {
    throw IoError(fmt::format("cannot bind {}:{}", config_.host, port));
  }
  http_->bound = true;
  return port;
}

void Service::run() {
  if (!http_ || !http_->bound) throw InvalidArgument("run() before bind()");
  http_->server.listen_after_bind();
}

void Service::stop() {
  if (http_) http_->server.stop();
}

}  // namespace jigsaw::service
