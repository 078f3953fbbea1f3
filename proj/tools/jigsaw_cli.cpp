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

// jigsaw: dataset generation, scoring, evaluation, analysis and the HTTP
// service. Talks to the library only through the C API.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jigsaw/jigsaw.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

int exit_code(jgs_status s) {
  switch (s) {
    case JGS_OK: return kExitOk;
    case JGS_CONFIG_ERROR:
    case JGS_INVALID_ARGUMENT: return kExitConfig;
    case JGS_IO_ERROR:
    case JGS_INVALID_INPUT:
    case JGS_NOT_FOUND: return kExitIo;
    default: return kExitFailure;
  }
}

int fail(jgs_status s) {
  std::fprintf(stderr, "jigsaw: %s\n", jgs_last_error());
  return exit_code(s);
}

// Owns a string handed out by the library.
struct Owned {
  char* p = nullptr;
  ~Owned() { jgs_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct ManifestHandle {
  jgs_manifest* m = nullptr;
  ~ManifestHandle() { jgs_manifest_free(m); }
};

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    std::fprintf(stderr, "jigsaw: cannot write '%s'\n", path.c_str());
    return false;
  }
  return true;
}

std::vector<std::string> split_commas(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  for (const auto& s : in) {
    std::size_t start = 0;
    while (start <= s.size()) {
      auto c = s.find(',', start);
      if (c == std::string::npos) c = s.size();
      if (c > start) out.push_back(s.substr(start, c - start));
      start = c + 1;
    }
  }
  return out;
}

struct GenerateOpts {
  std::string corpus;
  std::string out;
  std::vector<std::string> kinds{"pair"};
  std::string grid;
  std::string mix;
  std::string mode = "think";
  int count = 100;
  std::uint64_t seed = 0;
  bool transpose50 = false;
  int mask_gap = 0;
  double patch_scale = 0.5;
  std::string box_semantics = "occupant-origin";
  int jobs = 1;
};

int run_generate(const GenerateOpts& o) {
  Json cfg{{"corpus", o.corpus}, {"out", o.out}};
  cfg["kind"] = split_commas(o.kinds);
  if (!o.grid.empty()) cfg["grid"] = o.grid;
  if (!o.mix.empty()) cfg["mix"] = o.mix;
  if (o.grid.empty() && o.mix.empty()) cfg["grid"] = "2x1";
  cfg["mode"] = o.mode;
  cfg["count"] = o.count;
  cfg["seed"] = o.seed;
  cfg["transpose50"] = o.transpose50;
  cfg["mask_gap"] = o.mask_gap;
  cfg["patch_scale"] = o.patch_scale;
  cfg["box_semantics"] = o.box_semantics;
  cfg["jobs"] = o.jobs;
  Owned report;
  if (auto s = jgs_generate(cfg.dump().c_str(), &report.p)) return fail(s);
  const Json r = Json::parse(report.str());
  std::printf("records=%llu manifest=%s skipped=%zu\n", r.at("records").get<unsigned long long>(),
              r.at("manifest_path").get<std::string>().c_str(), r.at("skipped").size());
  return kExitOk;
}

struct ScoreOpts {
  std::string manifest;
  std::string responses;
  std::string out;
  std::string table;
};

int run_score(const ScoreOpts& o) {
  ManifestHandle m;
  if (auto s = jgs_manifest_load(o.manifest.c_str(), &m.m)) return fail(s);
  Owned records;
  Owned summary;
  if (auto s = jgs_score(m.m, o.responses.c_str(), &records.p, &summary.p)) return fail(s);
  if (!o.out.empty() && !write_file(o.out, records.str())) return kExitIo;
  const Json sum = Json::parse(summary.str());
  std::printf("n=%llu\n", sum.at("n").get<unsigned long long>());
  std::printf("mean_total=%.10g\n", sum.at("mean_total").get<double>());
  std::printf("mean_accuracy=%.10g\n", sum.at("mean_accuracy").get<double>());
  std::printf("mean_format=%.10g\n", sum.at("mean_format").get<double>());
  if (sum.at("missing").get<int>() > 0) std::fprintf(stderr, "jigsaw: %d questions had no response\n", sum.at("missing").get<int>());
  for (const auto& id : sum.at("unknown_ids")) {
    std::fprintf(stderr, "jigsaw: response for unknown id '%s' ignored\n", id.get<std::string>().c_str());
  }
  return kExitOk;
}

int run_eval(const ScoreOpts& o) {
  ManifestHandle m;
  if (auto s = jgs_manifest_load(o.manifest.c_str(), &m.m)) return fail(s);
  Owned records;
  Owned table_json;
  Owned table_text;
  if (auto s = jgs_evaluate(m.m, o.responses.c_str(), &records.p, &table_json.p, &table_text.p)) return fail(s);
  if (!o.out.empty() && !write_file(o.out, records.str())) return kExitIo;
  if (!o.table.empty() && !write_file(o.table, table_json.str() + "\n")) return kExitIo;
  std::fputs(table_text.str().c_str(), stdout);
  return kExitOk;
}

struct AnalyzeOpts {
  std::string responses;
  std::string keywords;
  bool keywords_default = false;
  double alpha = 0.1;
  std::string out;
};

int run_analyze(const AnalyzeOpts& o) {
  std::string kw;
  if (!o.keywords.empty()) {
    std::ifstream in(o.keywords, std::ios::binary);
    if (!in) {
      std::fprintf(stderr, "jigsaw: cannot open '%s'\n", o.keywords.c_str());
      return kExitIo;
    }
    kw.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  Owned analysis;
  if (auto s = jgs_analyze(o.responses.c_str(), kw.empty() ? nullptr : kw.c_str(), o.alpha, &analysis.p)) {
    return fail(s);
  }
  const Json a = Json::parse(analysis.str());
  if (!o.out.empty() && !write_file(o.out, a.dump(2) + "\n")) return kExitIo;
  std::printf("%-12s %9s %13s %17s %11s %11s\n", "step", "responses", "backtracking", "backward_chaining",
              "mean_chars", "mean_tokens");
  for (const auto& s : a.at("steps")) {
    std::printf("%-12s %9llu %13.4f %17.4f %11.1f %11.1f\n", s.at("step").get<std::string>().c_str(),
                s.at("responses").get<unsigned long long>(), s.at("backtracking").get<double>(),
                s.at("backward_chaining").get<double>(), s.at("mean_chars").get<double>(),
                s.at("mean_tokens").get<double>());
  }
  return kExitOk;
}

struct ServeOpts {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string manifest;
  std::size_t batch_cap = 4096;
  std::string token;
  std::string data_root = "jigsaw-datasets";
  bool quiet = false;
};

int run_serve(const ServeOpts& o) {
  Json cfg{{"host", o.host},   {"port", o.port},           {"batch_cap", o.batch_cap},
           {"token", o.token}, {"data_root", o.data_root}, {"log_requests", !o.quiet}};
  if (!o.manifest.empty()) cfg["manifest"] = o.manifest;

  // Handle SIGINT/SIGTERM on a dedicated thread so stopping is not done from
  // inside a signal handler.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  jgs_server* server = nullptr;
  if (auto s = jgs_server_create(cfg.dump().c_str(), &server)) return fail(s);
  int port = 0;
  if (auto s = jgs_server_bind(server, &port)) {
    jgs_server_free(server);
    return fail(s);
  }
  std::fprintf(stderr, "jigsaw %s listening on %s:%d\n", jgs_version(), o.host.c_str(), port);
  std::fflush(stderr);

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    jgs_server_stop(server);
  });
  const jgs_status s = jgs_server_run(server);
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  jgs_server_free(server);
  return s == JGS_OK ? kExitOk : fail(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jigsaw puzzle tasks for reinforcement learning: generation, rewards and evaluation."};
  app.set_version_flag("--version", std::string(jgs_version()));
  app.require_subcommand(1);

  GenerateOpts gen;
  auto* g = app.add_subcommand("generate", "Build a dataset from an image corpus");
  g->add_option("--corpus", gen.corpus, "Directory of PNG/JPEG images")->required()->envname("JIGSAW_CORPUS");
  g->add_option("--out", gen.out, "Output directory")->required()->envname("JIGSAW_OUT");
  g->add_option("--kind", gen.kinds, "full, pair or box (repeat or comma-separate)")->envname("JIGSAW_KIND");
  g->add_option("--grid", gen.grid, "Grid as MxN (rows x columns)")->envname("JIGSAW_GRID");
  g->add_option("--mix", gen.mix, "Grid mix, e.g. 3x1:0.5,4x1:0.5")->envname("JIGSAW_MIX");
  g->add_option("--mode", gen.mode, "think or nothink")->envname("JIGSAW_MODE");
  g->add_option("--count", gen.count, "Questions per kind")->envname("JIGSAW_COUNT");
  g->add_option("--seed", gen.seed, "Dataset seed")->envname("JIGSAW_SEED");
  g->add_flag("--transpose50", gen.transpose50, "Transpose each puzzle with probability 1/2")
      ->envname("JIGSAW_TRANSPOSE50");
  g->add_option("--mask-gap", gen.mask_gap, "Gap in pixels between patches (0 = none)")->envname("JIGSAW_MASK_GAP");
  g->add_option("--patch-scale", gen.patch_scale, "Box patch size relative to its region")
      ->envname("JIGSAW_PATCH_SCALE");
  g->add_option("--box-semantics", gen.box_semantics, "occupant-origin or target-location")
      ->envname("JIGSAW_BOX_SEMANTICS");
  g->add_option("--jobs", gen.jobs, "Worker threads")->envname("JIGSAW_JOBS");

  ScoreOpts score;
  auto* sc = app.add_subcommand("score", "Score responses against a manifest");
  sc->add_option("--manifest", score.manifest)->required()->envname("JIGSAW_MANIFEST");
  sc->add_option("--responses", score.responses, "JSONL with id, raw_text and optional step")
      ->required()
      ->envname("JIGSAW_RESPONSES");
  sc->add_option("--out", score.out, "Per-response records (JSONL)")->envname("JIGSAW_OUT");

  ScoreOpts ev;
  auto* e = app.add_subcommand("eval", "Evaluate responses and print the accuracy table");
  e->add_option("--manifest", ev.manifest)->required()->envname("JIGSAW_MANIFEST");
  e->add_option("--responses", ev.responses)->required()->envname("JIGSAW_RESPONSES");
  e->add_option("--out", ev.out, "Per-response records (JSONL)")->envname("JIGSAW_OUT");
  e->add_option("--table", ev.table, "Write the table as JSON")->envname("JIGSAW_TABLE");

  AnalyzeOpts an;
  auto* a = app.add_subcommand("analyze", "Keyword frequencies and completion lengths per step");
  a->add_option("--responses", an.responses)->required()->envname("JIGSAW_RESPONSES");
  auto* kw_default = a->add_flag("--keywords-default", an.keywords_default, "Use the built-in keyword lists");
  a->add_option("--keywords", an.keywords, "JSON file with backtracking / backward_chaining lists")
      ->excludes(kw_default)
      ->envname("JIGSAW_KEYWORDS");
  a->add_option("--alpha", an.alpha, "Exponential smoothing factor")->envname("JIGSAW_ALPHA");
  a->add_option("--out", an.out, "Analysis JSON")->envname("JIGSAW_OUT");

  ServeOpts sv;
  auto* s = app.add_subcommand("serve", "Run the HTTP scoring service");
  s->add_option("--host", sv.host)->envname("JIGSAW_HOST");
  s->add_option("--port", sv.port, "0 picks a free port")->envname("JIGSAW_PORT");
  s->add_option("--manifest", sv.manifest)->envname("JIGSAW_MANIFEST");
  s->add_option("--batch-cap", sv.batch_cap, "Largest accepted /v1/score batch")->envname("JIGSAW_BATCH_CAP");
  s->add_option("--token", sv.token, "Require this value in the X-Jigsaw-Token header")->envname("JIGSAW_TOKEN");
  s->add_option("--data-root", sv.data_root, "Default parent of datasets built over HTTP")
      ->envname("JIGSAW_DATA_ROOT");
  s->add_flag("--quiet", sv.quiet, "No request logs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForVersion& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitConfig;
  }

  try {
    if (*g) return run_generate(gen);
    if (*sc) return run_score(score);
    if (*e) return run_eval(ev);
    if (*a) return run_analyze(an);
    if (*s) return run_serve(sv);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "jigsaw: %s\n", ex.what());
    return kExitFailure;
  }
  return kExitFailure;
}
