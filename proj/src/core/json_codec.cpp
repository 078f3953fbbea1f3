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

#include "jigsaw/core/json_codec.hpp"

#include <fmt/format.h>

#include "jigsaw/core/errors.hpp"
#include "jigsaw/core/parsing.hpp"

namespace jigsaw::codec {

namespace {

Json mask_to_json(const MaskConfig& m) {
  return Json{{"enabled", m.enabled}, {"gap_px", m.gap_px}, {"fill", Json::array({m.fill.r, m.fill.g, m.fill.b})}};
}

MaskConfig mask_from_json(const Json& j) {
  MaskConfig m;
  m.enabled = j.at("enabled").get<bool>();
  m.gap_px = j.at("gap_px").get<int>();
  const auto& f = j.at("fill");
  m.fill = {f.at(0).get<std::uint8_t>(), f.at(1).get<std::uint8_t>(), f.at(2).get<std::uint8_t>()};
  if (m.enabled != (m.gap_px > 0)) throw InvalidInput("mask: gap_px must be positive exactly when enabled");
  return m;
}

Json rects_to_json(const std::vector<PixelRect>& rects) {
  Json arr = Json::array();
  for (const auto& r : rects) arr.push_back(to_json(r));
  return arr;
}

std::vector<PixelRect> rects_from_json(const Json& j) {
  std::vector<PixelRect> out;
  for (const auto& r : j) out.push_back(rect_from_json(r));
  return out;
}

std::string_view schema_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::kFull: return "grid";
    case TaskKind::kPair: return "letter";
    case TaskKind::kBox: return "bbox";
  }
  return "?";
}

Question question_from_json_impl(const Json& j) {
  Question q;
  q.id = j.at("id").get<std::string>();
  q.kind = task_kind_from_string(j.at("kind").get<std::string>());
  q.mode = prompt_mode_from_string(j.at("mode").get<std::string>());
  q.grid = grid_from_json(j.at("grid"));
  q.image_path = j.value("image_path", std::string());
  q.prompt = j.value("prompt", std::string());
  q.truth = truth_from_json(j.at("ground_truth"), q.kind, q.grid);
  if (j.contains("choices")) {
    for (const auto& c : j.at("choices")) {
      const auto letter = c.at("letter").get<std::string>();
      if (letter.size() != 1) throw InvalidInput("choice letter must be one character");
      q.choices.push_back({letter[0], direction_from_string(c.at("direction").get<std::string>()),
                           c.at("text").get<std::string>()});
    }
  }
  if (!j.contains("metadata")) return q;
  const auto& m = j.at("metadata");
  auto& meta = q.meta;
  meta.seed = m.value("seed", std::uint64_t{0});
  meta.source_ref = m.value("source_ref", std::string());
  if (m.contains("source_grid")) meta.source_grid = grid_from_json(m.at("source_grid"));
  meta.transposed = m.value("transposed", false);
  if (m.contains("permutation")) meta.permutation = Permutation(m.at("permutation").get<std::vector<int>>());
  if (m.contains("pair_positions")) {
    const auto& p = m.at("pair_positions");
    meta.pair_positions = std::make_pair(p.at(0).get<int>(), p.at(1).get<int>());
  }
  if (m.contains("choice_order")) {
    for (const auto& d : m.at("choice_order")) meta.choice_order.push_back(direction_from_string(d.get<std::string>()));
  }
  if (m.contains("target_region")) meta.target_region = m.at("target_region").get<int>();
  if (m.contains("patch_scale")) meta.patch_scale = m.at("patch_scale").get<double>();
  if (m.contains("box_semantics")) meta.box_semantics = box_semantics_from_string(m.at("box_semantics").get<std::string>());
  if (m.contains("region_rects")) meta.region_rects = rects_from_json(m.at("region_rects"));
  if (m.contains("patch_rects")) meta.patch_rects = rects_from_json(m.at("patch_rects"));
  if (m.contains("swap_perm")) meta.swap_perm = Permutation(m.at("swap_perm").get<std::vector<int>>());
  if (m.contains("mask")) meta.mask = mask_from_json(m.at("mask"));
  if (m.contains("image_size")) {
    meta.image_width = m.at("image_size").at(0).get<int>();
    meta.image_height = m.at("image_size").at(1).get<int>();
  }
  if (m.contains("patch_size")) {
    meta.patch_width = m.at("patch_size").at(0).get<int>();
    meta.patch_height = m.at("patch_size").at(1).get<int>();
  }
  return q;
}

}  // namespace

Json to_json(const GridSpec& grid) { return Json::array({grid.rows(), grid.cols()}); }

GridSpec grid_from_json(const Json& j) {
  if (j.is_string()) return GridSpec::parse(j.get<std::string>());
  if (!j.is_array() || j.size() != 2) throw InvalidInput("grid must be [rows, cols] or \"MxN\"");
  return GridSpec(j.at(0).get<int>(), j.at(1).get<int>());
}

Json to_json(const PixelRect& r) { return Json::array({r.x1, r.y1, r.x2, r.y2}); }

PixelRect rect_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw InvalidInput("rect must be [x1, y1, x2, y2]");
  return {j.at(0).get<std::int64_t>(), j.at(1).get<std::int64_t>(), j.at(2).get<std::int64_t>(),
          j.at(3).get<std::int64_t>()};
}

Json truth_to_json(const GroundTruth& truth, const GridSpec& grid) {
  if (const auto* g = std::get_if<GridAnswer>(&truth)) {
    Json rows = Json::array();
    const auto n = static_cast<std::size_t>(grid.cols());
    for (std::size_t r = 0; r * n < g->values.size(); ++r) {
      rows.push_back(std::vector<std::int64_t>(g->values.begin() + static_cast<std::ptrdiff_t>(r * n),
                                               g->values.begin() + static_cast<std::ptrdiff_t>((r + 1) * n)));
    }
    return rows;
  }
  if (const auto* l = std::get_if<LetterAnswer>(&truth)) return std::string(1, l->letter);
  return to_json(std::get<BoxAnswer>(truth).rect);
}

GroundTruth truth_from_json(const Json& j, TaskKind kind, const GridSpec& grid) {
  switch (kind) {
    case TaskKind::kFull: {
      GridAnswer g;
      if (j.is_string()) {
        const auto parsed_grid = parse_grid(j.get<std::string>(), grid);
        if (!parsed_grid) throw InvalidInput("ground truth grid text does not match the grid shape");
        g = *parsed_grid;
      } else {
        for (const auto& row : j) {
          if (row.is_array()) {
            for (const auto& v : row) g.values.push_back(v.get<std::int64_t>());
          } else {
            g.values.push_back(row.get<std::int64_t>());
          }
        }
      }
      if (g.values.size() != static_cast<std::size_t>(grid.piece_count())) {
        throw InvalidInput(fmt::format("ground truth has {} cells, grid {} has {}", g.values.size(), grid.to_string(),
                                       grid.piece_count()));
      }
      return g;
    }
    case TaskKind::kPair: {
      const auto s = j.get<std::string>();
      if (s.size() != 1 || s[0] < 'A' || s[0] - 'A' >= pair_choice_count(grid)) {
        throw InvalidInput(fmt::format("ground truth letter '{}' invalid for grid {}", s, grid.to_string()));
      }
      return LetterAnswer{s[0]};
    }
    case TaskKind::kBox: {
      const auto r = rect_from_json(j);
      if (r.empty()) throw InvalidInput("ground truth box is empty");
      return BoxAnswer{r};
    }
  }
  throw InvalidInput("unknown task kind");
}

Json to_json(const Question& q) {
  Json j;
  j["id"] = q.id;
  j["kind"] = std::string(to_string(q.kind));
  j["mode"] = std::string(to_string(q.mode));
  j["grid"] = to_json(q.grid);
  j["image_path"] = q.image_path;
  j["prompt"] = q.prompt;
  j["answer_schema"] = std::string(schema_name(q.kind));
  j["ground_truth"] = truth_to_json(q.truth, q.grid);
  j["ground_truth_text"] = render_answer(q.truth, q.grid);
  if (!q.choices.empty()) {
    Json choices = Json::array();
    for (const auto& c : q.choices) {
      choices.push_back({{"letter", std::string(1, c.letter)},
                         {"direction", std::string(to_string(c.direction))},
                         {"text", c.text}});
    }
    j["choices"] = std::move(choices);
  }
  const auto& meta = q.meta;
  Json m;
  m["seed"] = meta.seed;
  m["source_ref"] = meta.source_ref;
  if (meta.source_grid) m["source_grid"] = to_json(*meta.source_grid);
  m["transposed"] = meta.transposed;
  if (meta.permutation) m["permutation"] = std::vector<int>(meta.permutation->values().begin(), meta.permutation->values().end());
  if (meta.pair_positions) m["pair_positions"] = Json::array({meta.pair_positions->first, meta.pair_positions->second});
  if (!meta.choice_order.empty()) {
    Json order = Json::array();
    for (Direction d : meta.choice_order) order.push_back(std::string(to_string(d)));
    m["choice_order"] = std::move(order);
  }
  if (meta.target_region) m["target_region"] = *meta.target_region;
  if (meta.patch_scale) m["patch_scale"] = *meta.patch_scale;
  if (meta.box_semantics) m["box_semantics"] = std::string(to_string(*meta.box_semantics));
  if (!meta.region_rects.empty()) m["region_rects"] = rects_to_json(meta.region_rects);
  if (!meta.patch_rects.empty()) m["patch_rects"] = rects_to_json(meta.patch_rects);
  if (meta.swap_perm) m["swap_perm"] = std::vector<int>(meta.swap_perm->values().begin(), meta.swap_perm->values().end());
  m["mask"] = mask_to_json(meta.mask);
  m["image_size"] = Json::array({meta.image_width, meta.image_height});
  m["patch_size"] = Json::array({meta.patch_width, meta.patch_height});
  j["metadata"] = std::move(m);
  return j;
}

Question question_from_json(const Json& j) {
  try {
    return question_from_json_impl(j);
  } catch (const Json::exception& e) {
    throw InvalidInput(fmt::format("malformed question record: {}", e.what()));
  } catch (const InvalidInput&) {
    throw;
  } catch (const Error& e) {
    throw InvalidInput(fmt::format("malformed question record: {}", e.what()));
  }
}

Question inline_question_from_json(const Json& j) {
  try {
    Question q;
    q.id = j.value("id", std::string());
    q.kind = task_kind_from_string(j.at("kind").get<std::string>());
    q.mode = prompt_mode_from_string(j.at("mode").get<std::string>());
    q.grid = grid_from_json(j.at("grid"));
    q.truth = truth_from_json(j.at("ground_truth"), q.kind, q.grid);
    return q;
  } catch (const Json::exception& e) {
    throw InvalidInput(fmt::format("malformed inline question: {}", e.what()));
  } catch (const InvalidInput&) {
    throw;
  } catch (const Error& e) {
    throw InvalidInput(fmt::format("malformed inline question: {}", e.what()));
  }
}

namespace {

DatasetConfig dataset_config_impl(const Json& j) {
  DatasetConfig cfg;
  cfg.corpus_dir = j.at("corpus").get<std::string>();
  cfg.out_dir = j.at("out").get<std::string>();
  if (j.contains("kind")) {
    cfg.kinds.clear();
    const auto& k = j.at("kind");
    if (k.is_array()) {
      for (const auto& e : k) cfg.kinds.push_back(task_kind_from_string(e.get<std::string>()));
    } else {
      cfg.kinds.push_back(task_kind_from_string(k.get<std::string>()));
    }
  }
  if (j.contains("mix") && j.contains("grid")) throw ConfigError("give either grid or mix, not both");
  if (j.contains("mix")) {
    cfg.grids = parse_mix(j.at("mix").get<std::string>());
  } else if (j.contains("grid")) {
    cfg.grids = {{grid_from_json(j.at("grid")), 1.0}};
  }
  if (j.contains("mode")) cfg.mode = prompt_mode_from_string(j.at("mode").get<std::string>());
  cfg.count = j.value("count", cfg.count);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.transpose_50 = j.value("transpose50", cfg.transpose_50);
  cfg.mask = MaskConfig::with_gap(j.value("mask_gap", 0));
  cfg.patch_scale = j.value("patch_scale", cfg.patch_scale);
  if (j.contains("box_semantics")) cfg.box_semantics = box_semantics_from_string(j.at("box_semantics").get<std::string>());
  cfg.jobs = j.value("jobs", cfg.jobs);
  cfg.validate();
  return cfg;
}

}  // namespace

DatasetConfig dataset_config_from_json(const Json& j) {
  try {
    return dataset_config_impl(j);
  } catch (const Json::exception& e) {
    throw ConfigError(fmt::format("malformed dataset config: {}", e.what()));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

Json to_json(const RewardBreakdown& r) {
  return Json{{"accuracy", r.accuracy}, {"format", r.format}, {"total", r.total}};
}

Json to_json(const TagCompliance& t) {
  return Json{{"think_open", t.think_open},   {"think_close", t.think_close},     {"answer_open", t.answer_open},
              {"answer_close", t.answer_close}, {"correct_order", t.correct_order}};
}

Json to_json(const EvalRecord& r) {
  Json j;
  j["id"] = r.id;
  j["kind"] = std::string(to_string(r.kind));
  j["mode"] = std::string(to_string(r.mode));
  j["grid"] = r.grid.to_string();
  j["accuracy"] = r.reward.accuracy;
  j["format"] = r.reward.format;
  j["total"] = r.reward.total;
  j["eval_correct"] = r.eval_correct;
  j["eval_value"] = r.eval_value;
  if (r.iou) j["iou"] = *r.iou;
  j["parsed"] = r.parsed;
  j["tags"] = to_json(r.tags);
  j["chars"] = r.completion_chars;
  j["tokens"] = r.completion_tokens;
  if (r.step) j["step"] = *r.step;
  return j;
}

Json to_json(const EvalTable& table) {
  Json rows = Json::array();
  for (const auto& [kind, mode] : table.rows()) {
    Json cells = Json::object();
    for (const auto& g : table.columns(kind, mode)) {
      const auto* c = table.cell(kind, mode, g);
      cells[g.to_string()] = {{"n", c->n},
                              {"percent", c->percent()},
                              {"mean_total_reward", c->n ? c->reward_sum / static_cast<double>(c->n) : 0.0}};
    }
    rows.push_back({{"kind", std::string(to_string(kind))},
                    {"mode", std::string(to_string(mode))},
                    {"cells", std::move(cells)},
                    {"avg", table.average(kind, mode)}});
  }
  return rows;
}

Json to_json(const Analysis& a) {
  Json steps = Json::array();
  for (const auto& s : a.steps) {
    steps.push_back({{"step", s.step},
                     {"responses", s.responses},
                     {"backtracking", s.backtracking},
                     {"backward_chaining", s.backward_chaining},
                     {"mean_chars", s.mean_chars},
                     {"mean_tokens", s.mean_tokens},
                     {"keyword_counts", s.keyword_counts}});
  }
  Json series = Json::object();
  for (const auto& [name, values] : a.series) series[name] = values;
  return Json{{"alpha", a.alpha}, {"steps", std::move(steps)}, {"series", std::move(series)}};
}

grpo::Config grpo_config_from_json(const Json& j, int group_size) {
  grpo::Config cfg;
  cfg.group_size = group_size;
  if (j.is_object()) {
    cfg.clip_eps = j.value("clip_eps", cfg.clip_eps);
    cfg.kl_coeff = j.value("kl_coeff", cfg.kl_coeff);
    cfg.std_floor = j.value("std_floor", cfg.std_floor);
    cfg.inner_iterations = j.value("inner_iterations", cfg.inner_iterations);
    cfg.clip_ratio = j.value("clip_ratio", cfg.clip_ratio);
    const auto kl = j.value("kl_estimator", std::string("k3"));
    if (kl == "k3") {
      cfg.kl_estimator = grpo::KlEstimator::kK3;
    } else if (kl == "k1") {
      cfg.kl_estimator = grpo::KlEstimator::kK1;
    } else {
      throw InvalidArgument(fmt::format("unknown kl_estimator '{}'", kl));
    }
    const auto agg = j.value("aggregation", std::string("sample_mean"));
    if (agg == "sample_mean") {
      cfg.aggregation = grpo::Aggregation::kSampleMean;
    } else if (agg == "token_sum") {
      cfg.aggregation = grpo::Aggregation::kTokenSum;
    } else {
      throw InvalidArgument(fmt::format("unknown aggregation '{}'", agg));
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace jigsaw::codec
