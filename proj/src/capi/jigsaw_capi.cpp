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

#include "jigsaw/jigsaw.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "jigsaw/core/errors.hpp"
#include "jigsaw/core/harness.hpp"
#include "jigsaw/core/json_codec.hpp"
#include "jigsaw/core/service.hpp"
#include "jigsaw/version.hpp"

using jigsaw::codec::Json;

struct jgs_manifest {
  jigsaw::Manifest manifest;
  std::unique_ptr<jigsaw::service::Service> service;
};

struct jgs_server {
  std::unique_ptr<jigsaw::service::Service> service;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size());
  p[s.size()] = '\0';
  return p;
}

void put(char** out, const std::string& s) {
  if (out != nullptr) *out = dup(s);
}

template <class Fn>
jgs_status wrap(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return JGS_OK;
  } catch (const jigsaw::InvalidArgument& e) {
    last_error = e.what();
    return JGS_INVALID_ARGUMENT;
  } catch (const jigsaw::ConfigError& e) {
    last_error = e.what();
    return JGS_CONFIG_ERROR;
  } catch (const jigsaw::IoError& e) {
    last_error = e.what();
    return JGS_IO_ERROR;
  } catch (const jigsaw::NotFound& e) {
    last_error = e.what();
    return JGS_NOT_FOUND;
  } catch (const jigsaw::InvalidInput& e) {
    last_error = e.what();
    return JGS_INVALID_INPUT;
  } catch (const jigsaw::Conflict& e) {
    last_error = e.what();
    return JGS_CONFLICT;
  } catch (const Json::exception& e) {
    last_error = e.what();
    return JGS_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return JGS_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return JGS_INTERNAL;
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw jigsaw::InvalidArgument(std::string(name) + " is NULL");
}

Json parse_json(const char* text, const char* what) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw jigsaw::InvalidArgument(std::string(what) + " is not valid JSON");
  return j;
}

std::string records_jsonl(const std::vector<jigsaw::EvalRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += jigsaw::codec::to_json(r).dump();
    out += '\n';
  }
  return out;
}

std::string summary_json(const jigsaw::EvalResult& result) {
  double total = 0.0;
  double acc = 0.0;
  double fmt = 0.0;
  std::size_t correct = 0;
  for (const auto& r : result.records) {
    total += r.reward.total;
    acc += r.reward.accuracy;
    fmt += r.reward.format;
    correct += r.eval_correct;
  }
  const double n = result.records.empty() ? 1.0 : static_cast<double>(result.records.size());
  return Json{{"n", result.records.size()},
              {"mean_total", total / n},
              {"mean_accuracy", acc / n},
              {"mean_format", fmt / n},
              {"eval_correct", correct},
              {"missing", result.missing},
              {"unknown_ids", result.unknown_ids}}
      .dump();
}

void reply_out(const jigsaw::service::Reply& r, char** reply, int* status) {
  put(reply, r.body);
  if (status != nullptr) *status = r.status;
}

}  // namespace

extern "C" {

const char* jgs_version(void) { return jigsaw::kVersion; }

const char* jgs_last_error(void) { return last_error.c_str(); }

void jgs_free(char* str) { std::free(str); }

jgs_status jgs_generate(const char* config_json, char** report_out) {
  return wrap([&] {
    require(config_json, "config_json");
    const auto cfg = jigsaw::codec::dataset_config_from_json(parse_json(config_json, "config_json"));
    const auto built = jigsaw::build_dataset(cfg);
    Json skipped = Json::array();
    for (const auto& [path, reason] : built.skipped) skipped.push_back({{"path", path.string()}, {"reason", reason}});
    put(report_out, Json{{"records", built.manifest.records.size()},
                         {"manifest_path", built.manifest_path.string()},
                         {"skipped", std::move(skipped)}}
                        .dump());
  });
}

jgs_status jgs_manifest_load(const char* path, jgs_manifest** out) {
  return wrap([&] {
    require(path, "path");
    require(out, "out");
    auto m = std::make_unique<jgs_manifest>();
    m->manifest = jigsaw::load_manifest(path);
    jigsaw::service::Config cfg;
    cfg.log_requests = false;
    m->service = std::make_unique<jigsaw::service::Service>(cfg);
    m->service->load_manifest(path);
    *out = m.release();
  });
}

void jgs_manifest_free(jgs_manifest* manifest) { delete manifest; }

size_t jgs_manifest_size(const jgs_manifest* manifest) {
  return manifest == nullptr ? 0 : manifest->manifest.records.size();
}

jgs_status jgs_manifest_record(const jgs_manifest* manifest, size_t index, char** json_out) {
  return wrap([&] {
    require(manifest, "manifest");
    require(json_out, "json_out");
    if (index >= manifest->manifest.records.size()) throw jigsaw::NotFound("record index out of range");
    put(json_out, jigsaw::codec::to_json(manifest->manifest.records[index]).dump());
  });
}

jgs_status jgs_score(const jgs_manifest* manifest, const char* responses_path, char** records_out,
                     char** summary_out) {
  return wrap([&] {
    require(manifest, "manifest");
    require(responses_path, "responses_path");
    const auto result = jigsaw::evaluate(manifest->manifest, jigsaw::load_responses(responses_path));
    put(records_out, records_jsonl(result.records));
    put(summary_out, summary_json(result));
  });
}

jgs_status jgs_evaluate(const jgs_manifest* manifest, const char* responses_path, char** records_out,
                        char** table_json_out, char** table_text_out) {
  return wrap([&] {
    require(manifest, "manifest");
    require(responses_path, "responses_path");
    const auto result = jigsaw::evaluate(manifest->manifest, jigsaw::load_responses(responses_path));
    put(records_out, records_jsonl(result.records));
    put(table_json_out, jigsaw::codec::to_json(result.table).dump());
    put(table_text_out, result.table.to_text());
  });
}

jgs_status jgs_analyze(const char* responses_path, const char* keywords_json, double alpha, char** analysis_out) {
  return wrap([&] {
    require(responses_path, "responses_path");
    jigsaw::KeywordSpec spec;
    if (keywords_json != nullptr) {
      const Json k = parse_json(keywords_json, "keywords_json");
      if (k.contains("backtracking")) spec.backtracking = k.at("backtracking").get<std::vector<std::string>>();
      if (k.contains("backward_chaining")) {
        spec.backward_chaining = k.at("backward_chaining").get<std::vector<std::string>>();
      }
    }
    const auto analysis = jigsaw::analyze(jigsaw::load_responses(responses_path), spec, alpha);
    put(analysis_out, jigsaw::codec::to_json(analysis).dump());
  });
}

jgs_status jgs_score_json(const jgs_manifest* manifest, const char* request_json, char** reply, int* http_status) {
  return wrap([&] {
    require(request_json, "request_json");
    if (manifest != nullptr) {
      reply_out(manifest->service->score(request_json), reply, http_status);
      return;
    }
    jigsaw::service::Config cfg;
    cfg.log_requests = false;
    const jigsaw::service::Service svc(cfg);
    reply_out(svc.score(request_json), reply, http_status);
  });
}

jgs_status jgs_learning_signal_json(const char* request_json, char** reply, int* http_status) {
  return wrap([&] {
    require(request_json, "request_json");
    jigsaw::service::Config cfg;
    cfg.log_requests = false;
    const jigsaw::service::Service svc(cfg);
    reply_out(svc.learning_signal(request_json), reply, http_status);
  });
}

jgs_status jgs_server_create(const char* config_json, jgs_server** out) {
  return wrap([&] {
    require(out, "out");
    jigsaw::service::Config cfg;
    std::string manifest;
    if (config_json != nullptr) {
      const Json j = parse_json(config_json, "config_json");
      try {
        cfg.host = j.value("host", cfg.host);
        cfg.port = j.value("port", cfg.port);
        cfg.batch_cap = j.value("batch_cap", cfg.batch_cap);
        cfg.token = j.value("token", cfg.token);
        cfg.data_root = j.value("data_root", cfg.data_root.string());
        cfg.log_requests = j.value("log_requests", cfg.log_requests);
        manifest = j.value("manifest", std::string());
      } catch (const Json::exception& e) {
        throw jigsaw::ConfigError(e.what());
      }
    }
    auto server = std::make_unique<jgs_server>();
    server->service = std::make_unique<jigsaw::service::Service>(cfg);
    if (!manifest.empty()) server->service->load_manifest(manifest);
    *out = server.release();
  });
}

jgs_status jgs_server_bind(jgs_server* server, int* port_out) {
  return wrap([&] {
    require(server, "server");
    const int port = server->service->bind();
    if (port_out != nullptr) *port_out = port;
  });
}

jgs_status jgs_server_run(jgs_server* server) {
  return wrap([&] {
    require(server, "server");
    server->service->run();
  });
}

void jgs_server_stop(jgs_server* server) {
  if (server != nullptr) server->service->stop();
}

void jgs_server_free(jgs_server* server) { delete server; }

}  // extern "C"
