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

#include "jigsaw/core/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "jigsaw/core/errors.hpp"
#include "jigsaw/core/json_codec.hpp"
#include "jigsaw/core/taskgen.hpp"

namespace jigsaw {

namespace fs = std::filesystem;
using codec::Json;

namespace {

bool has_image_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

struct Job {
  TaskKind kind;
  GridSpec grid;
  int index;
};

std::string item_id(TaskKind kind, const GridSpec& grid, int index) {
  return fmt::format("{}-{}-{:06}", to_string(kind), grid.to_string(), index);
}

Question generate_item(const DatasetConfig& config, const Corpus& corpus, const Job& job) {
  const std::uint64_t seed = item_seed(config.seed, job.kind, job.grid, job.index);
  const std::string id = item_id(job.kind, job.grid, job.index);
  Rng pick(seed, Stream::kSourceImage);
  const fs::path& source = corpus.images[static_cast<std::size_t>(pick.below(corpus.images.size()))];
  const std::string source_ref = source.lexically_relative(config.corpus_dir).generic_string();
  const std::string image_rel = "images/" + id + ".png";
  const RasterImage image = load_image(source);

  Question q;
  RasterImage rendered;
  if (job.kind == TaskKind::kBox) {
    Rng target(seed, Stream::kBoxTarget);
    const RasterImage trimmed = trim_to_grid(image, job.grid);
    auto task = make_box(trimmed.width(), trimmed.height(), job.grid,
                         static_cast<int>(target.below(static_cast<std::uint64_t>(job.grid.piece_count()))) + 1,
                         config.patch_scale, seed, config.mode, config.box_semantics);
    rendered = render_box_swap(trimmed, task.box.patch_rects, task.box.swap_perm);
    q = std::move(task.question);
    q.id = id;
    q.image_path = image_rel;
    q.meta.source_ref = source_ref;
  } else {
    PuzzleInstance inst = make_instance(id, source_ref, job.grid, seed, config.mask, config.transpose_50);
    inst.image_path = image_rel;
    rendered = render_puzzle(image, inst);
    if (job.kind == TaskKind::kFull) {
      q = make_full(inst, config.mode);
    } else {
      Rng pair_rng(seed, Stream::kPair);
      q = make_pair(inst, config.mode, pair_rng);
    }
  }
  save_png(rendered, config.out_dir / image_rel);
  return q;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

template <class Fn>
void for_each_line(const std::string& text, Fn&& fn) {
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    ++line_no;
    std::string_view line(text.data() + start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) fn(line, line_no);
    start = nl + 1;
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw IoError(fmt::format("short write to '{}'", path.string()));
}

bool is_integer(std::string_view s) {
  if (s.empty()) return false;
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool is_ascii_word(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || static_cast<unsigned char>(c) >= 0x80;
}

}  // namespace

// ---------------------------------------------------------------------------

void DatasetConfig::validate() const {
  if (kinds.empty()) throw ConfigError("at least one task kind is required");
  if (std::set<TaskKind>(kinds.begin(), kinds.end()).size() != kinds.size()) throw ConfigError("duplicate task kind");
  if (grids.empty()) throw ConfigError("at least one grid is required");
  std::set<std::pair<int, int>> seen;
  for (const auto& g : grids) {
    if (!seen.emplace(g.grid.rows(), g.grid.cols()).second) {
      throw ConfigError(fmt::format("grid {} listed twice", g.grid.to_string()));
    }
    if (!(g.ratio > 0.0) || !std::isfinite(g.ratio)) {
      throw ConfigError(fmt::format("grid {} has a non-positive ratio", g.grid.to_string()));
    }
  }
  if (count < 1) throw ConfigError("count must be at least 1");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  if (!(patch_scale > 0.0 && patch_scale <= 1.0)) throw ConfigError("patch scale must lie in (0, 1]");
  if (mask.enabled != (mask.gap_px > 0) || mask.gap_px < 0) throw ConfigError("mask gap must be positive when enabled");
}

std::vector<GridShare> parse_mix(std::string_view text) {
  std::vector<GridShare> shares;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    const auto entry = text.substr(start, comma - start);
    if (entry.empty()) throw ConfigError(fmt::format("empty entry in mix '{}'", text));
    const auto colon = entry.find(':');
    GridShare share{GridSpec::parse(entry.substr(0, colon)), 1.0};
    if (colon != std::string_view::npos) {
      const std::string ratio(entry.substr(colon + 1));
      char* end = nullptr;
      share.ratio = std::strtod(ratio.c_str(), &end);
      if (ratio.empty() || end != ratio.c_str() + ratio.size() || !(share.ratio > 0.0) || !std::isfinite(share.ratio)) {
        throw ConfigError(fmt::format("invalid ratio in mix entry '{}'", entry));
      }
    }
    shares.push_back(share);
    start = comma + 1;
  }
  return shares;
}

std::vector<int> allocate_counts(int count, const std::vector<double>& ratios) {
  double total = 0.0;
  for (double r : ratios) total += r;
  std::vector<int> out(ratios.size(), 0);
  if (ratios.empty() || !(total > 0.0)) return out;
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double quota = count * ratios[i] / total;
    out[i] = static_cast<int>(std::floor(quota));
    assigned += out[i];
    remainders.emplace_back(quota - out[i], i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < count; ++k, ++assigned) ++out[remainders[k % remainders.size()].second];
  return out;
}

std::uint64_t item_seed(std::uint64_t dataset_seed, TaskKind kind, const GridSpec& grid, int index) {
  const std::uint64_t kind_stream = derive_seed(dataset_seed, static_cast<std::uint64_t>(kind) + 1);
  const std::uint64_t grid_stream =
      derive_seed(kind_stream, (static_cast<std::uint64_t>(grid.rows()) << 32) | static_cast<std::uint32_t>(grid.cols()));
  return derive_seed(grid_stream, static_cast<std::uint64_t>(index));
}

Corpus scan_corpus(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError(fmt::format("corpus directory '{}' not found", dir.string()));
  std::vector<fs::path> candidates;
  for (auto it = fs::recursive_directory_iterator(dir, ec); !ec && it != fs::recursive_directory_iterator();
       it.increment(ec)) {
    if (it->is_regular_file(ec) && has_image_extension(it->path())) candidates.push_back(it->path());
  }
  if (ec) throw IoError(fmt::format("cannot list '{}': {}", dir.string(), ec.message()));
  std::sort(candidates.begin(), candidates.end());

  Corpus corpus;
  for (const auto& path : candidates) {
    try {
      const auto img = load_image(path);
      if (img.width() < 1 || img.height() < 1) throw IoError("empty image");
      corpus.images.push_back(path);
    } catch (const Error& e) {
      corpus.skipped.emplace_back(path, e.what());
    }
  }
  if (corpus.images.empty()) throw IoError(fmt::format("no readable PNG or JPEG image under '{}'", dir.string()));
  return corpus;
}

BuildResult build_dataset(const DatasetConfig& config) {
  config.validate();
  Corpus corpus = scan_corpus(config.corpus_dir);

  std::error_code ec;
  fs::create_directories(config.out_dir / "images", ec);
  if (ec) throw IoError(fmt::format("cannot create '{}': {}", (config.out_dir / "images").string(), ec.message()));

  std::vector<double> ratios;
  for (const auto& g : config.grids) ratios.push_back(g.ratio);
  std::vector<Job> jobs;
  for (TaskKind kind : config.kinds) {
    const auto counts = allocate_counts(config.count, ratios);
    for (std::size_t g = 0; g < config.grids.size(); ++g) {
      for (int j = 0; j < counts[g]; ++j) jobs.push_back({kind, config.grids[g].grid, j});
    }
  }

  std::vector<std::optional<Question>> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      try {
        results[k] = generate_item(config, corpus, jobs[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(config.jobs), jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  BuildResult result;
  for (auto& q : results) result.manifest.records.push_back(std::move(*q));
  std::sort(result.manifest.records.begin(), result.manifest.records.end(),
            [](const Question& a, const Question& b) { return a.id < b.id; });
  result.manifest_path = config.out_dir / "manifest.jsonl";
  result.skipped = std::move(corpus.skipped);
  save_manifest(result.manifest, result.manifest_path);

  Json report;
  report["records"] = result.manifest.records.size();
  report["seed"] = config.seed;
  report["mode"] = std::string(to_string(config.mode));
  report["transpose_50"] = config.transpose_50;
  report["patch_scale"] = config.patch_scale;
  report["box_semantics"] = std::string(to_string(config.box_semantics));
  Json skipped = Json::array();
  for (const auto& [path, reason] : result.skipped) skipped.push_back({{"path", path.generic_string()}, {"reason", reason}});
  report["skipped"] = std::move(skipped);
  write_text(config.out_dir / "build_report.json", report.dump(2) + "\n");
  return result;
}

Question regenerate_question(const Question& stored) {
  const auto& meta = stored.meta;
  Question q;
  if (stored.kind == TaskKind::kBox) {
    if (!meta.target_region || !meta.patch_scale) throw InvalidInput("box record lacks target region or patch scale");
    auto task = make_box(meta.image_width, meta.image_height, stored.grid, *meta.target_region, *meta.patch_scale,
                         meta.seed, stored.mode, meta.box_semantics.value_or(BoxSemantics::kCurrentOccupantOrigin));
    q = std::move(task.question);
    q.meta.source_ref = meta.source_ref;
  } else {
    const GridSpec source_grid = meta.source_grid.value_or(stored.grid);
    PuzzleInstance inst;
    inst.id = stored.id;
    inst.source_ref = meta.source_ref;
    inst.source_grid = source_grid;
    inst.seed = meta.seed;
    inst.mask = meta.mask;
    inst.patch_width = meta.patch_width;
    inst.patch_height = meta.patch_height;
    const Permutation perm = random_permutation(source_grid, meta.seed);
    if (meta.transposed) {
      auto t = transpose(source_grid, perm);
      inst.grid = t.grid;
      inst.perm = std::move(t.perm);
      inst.transposed = true;
    } else {
      inst.grid = source_grid;
      inst.perm = perm;
    }
    if (stored.kind == TaskKind::kFull) {
      q = make_full(inst, stored.mode);
    } else {
      Rng pair_rng(meta.seed, Stream::kPair);
      q = make_pair(inst, stored.mode, pair_rng);
    }
  }
  q.id = stored.id;
  q.image_path = stored.image_path;
  return q;
}

Question make_synthetic_question(TaskKind kind, PromptMode mode, const GridSpec& grid, std::uint64_t seed, int width,
                                 int height) {
  const std::string id = fmt::format("synthetic-{}-{}-{}", to_string(kind), grid.to_string(), seed);
  const int w = width / grid.cols() * grid.cols();
  const int h = height / grid.rows() * grid.rows();
  if (kind == TaskKind::kBox) {
    Rng target(seed, Stream::kBoxTarget);
    auto task = make_box(w, h, grid, static_cast<int>(target.below(static_cast<std::uint64_t>(grid.piece_count()))) + 1,
                         kDefaultPatchScale, seed, mode);
    task.question.id = id;
    return std::move(task.question);
  }
  PuzzleInstance inst = make_instance(id, "", grid, seed, MaskConfig::none(), false);
  inst.patch_width = w / grid.cols();
  inst.patch_height = h / grid.rows();
  if (kind == TaskKind::kFull) return make_full(inst, mode);
  Rng pair_rng(seed, Stream::kPair);
  return make_pair(inst, mode, pair_rng);
}

// ---------------------------------------------------------------------------

std::string question_to_json_line(const Question& q) { return codec::to_json(q).dump(); }

Question question_from_json_line(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::exception& e) {
    throw InvalidInput(fmt::format("invalid JSON: {}", e.what()));
  }
  return codec::question_from_json(j);
}

void save_manifest(const Manifest& manifest, const fs::path& path) {
  std::string text;
  for (const auto& q : manifest.records) {
    text += question_to_json_line(q);
    text += '\n';
  }
  write_text(path, text);
}

Manifest load_manifest(const fs::path& path) {
  Manifest m;
  std::set<std::string> ids;
  for_each_line(read_text(path), [&](std::string_view line, std::size_t line_no) {
    try {
      m.records.push_back(question_from_json_line(line));
    } catch (const Error& e) {
      throw InvalidInput(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
    if (!ids.insert(m.records.back().id).second) {
      throw InvalidInput(fmt::format("{}:{}: duplicate id '{}'", path.string(), line_no, m.records.back().id));
    }
  });
  return m;
}

std::vector<Response> load_responses(const fs::path& path) {
  std::vector<Response> out;
  for_each_line(read_text(path), [&](std::string_view line, std::size_t line_no) {
    try {
      const Json j = Json::parse(line);
      Response r;
      r.id = j.at("id").get<std::string>();
      r.raw_text = j.at("raw_text").get<std::string>();
      if (j.contains("step") && !j.at("step").is_null()) {
        const auto& s = j.at("step");
        r.step = s.is_string() ? s.get<std::string>() : s.dump();
      }
      out.push_back(std::move(r));
    } catch (const Json::exception& e) {
      throw InvalidInput(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  });
  return out;
}

void save_responses(const std::vector<Response>& responses, const fs::path& path) {
  std::string text;
  for (const auto& r : responses) {
    Json j{{"id", r.id}, {"raw_text", r.raw_text}};
    if (r.step) j["step"] = *r.step;
    text += j.dump();
    text += '\n';
  }
  write_text(path, text);
}

// ---------------------------------------------------------------------------

std::string wrap_answer(std::string_view answer, PromptMode mode, std::string_view thought) {
  if (mode == PromptMode::kNonThinking) return std::string(answer);
  return fmt::format("<think>\n{}\n</think>\n<answer>\n{}\n</answer>", thought, answer);
}

std::string random_agent(const Question& question, Rng& rng) {
  std::string answer;
  switch (question.kind) {
    case TaskKind::kFull: {
      const Permutation guess = random_permutation(question.grid, rng);
      const auto v = guess.values();
      answer = render_answer(GridAnswer{{v.begin(), v.end()}}, question.grid);
      break;
    }
    case TaskKind::kPair:
      answer = std::string(1, static_cast<char>('A' + rng.below(static_cast<std::uint64_t>(question.num_choices()))));
      break;
    case TaskKind::kBox: {
      const auto& truth = std::get<BoxAnswer>(question.truth).rect;
      const std::int64_t w = std::max<std::int64_t>(question.meta.image_width, truth.x2);
      const std::int64_t h = std::max<std::int64_t>(question.meta.image_height, truth.y2);
      const std::int64_t x1 = rng.between(0, w - truth.width());
      const std::int64_t y1 = rng.between(0, h - truth.height());
      answer = render_answer(BoxAnswer{{x1, y1, x1 + truth.width(), y1 + truth.height()}}, question.grid);
      break;
    }
  }
  return wrap_answer(answer, question.mode, "Random guess.");
}

std::string oracle_agent(const Question& question) {
  return wrap_answer(render_answer(question.truth, question.grid), question.mode);
}

// ---------------------------------------------------------------------------

void EvalTable::add(const EvalRecord& record) {
  auto& cell = cells_[Key{static_cast<int>(record.kind), static_cast<int>(record.mode), record.grid.rows(),
                          record.grid.cols()}];
  ++cell.n;
  cell.metric_sum += record.eval_value;
  cell.reward_sum += record.reward.total;
}

std::vector<std::pair<TaskKind, PromptMode>> EvalTable::rows() const {
  std::vector<std::pair<TaskKind, PromptMode>> out;
  for (const auto& [key, cell] : cells_) {
    const std::pair row{static_cast<TaskKind>(key.kind), static_cast<PromptMode>(key.mode)};
    if (out.empty() || out.back() != row) out.push_back(row);
  }
  return out;
}

std::vector<GridSpec> EvalTable::columns(TaskKind kind, PromptMode mode) const {
  std::vector<GridSpec> out;
  for (const auto& [key, cell] : cells_) {
    if (key.kind == static_cast<int>(kind) && key.mode == static_cast<int>(mode)) out.emplace_back(key.rows, key.cols);
  }
  std::sort(out.begin(), out.end(), [](const GridSpec& a, const GridSpec& b) {
    if (a.piece_count() != b.piece_count()) return a.piece_count() < b.piece_count();
    return a.rows() > b.rows();
  });
  return out;
}

const TableCell* EvalTable::cell(TaskKind kind, PromptMode mode, const GridSpec& grid) const {
  const auto it = cells_.find(Key{static_cast<int>(kind), static_cast<int>(mode), grid.rows(), grid.cols()});
  return it == cells_.end() ? nullptr : &it->second;
}

double EvalTable::average(TaskKind kind, PromptMode mode) const {
  const auto cols = columns(kind, mode);
  if (cols.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& g : cols) sum += cell(kind, mode, g)->percent();
  return sum / static_cast<double>(cols.size());
}

std::string EvalTable::to_text(std::string_view method) const {
  std::string out;
  for (const auto& [kind, mode] : rows()) {
    const auto cols = columns(kind, mode);
    if (!out.empty()) out += '\n';
    out += fmt::format("[{} | {}]\n", to_string(kind), to_string(mode));
    out += fmt::format("{:<12}", "Method");
    for (const auto& g : cols) out += fmt::format("{:>9}", g.to_string());
    out += fmt::format("{:>9}\n", "AVG");
    out += fmt::format("{:<12}", method);
    for (const auto& g : cols) out += fmt::format("{:>9.2f}", cell(kind, mode, g)->percent());
    out += fmt::format("{:>9.2f}\n", average(kind, mode));
    out += fmt::format("{:<12}", "n");
    for (const auto& g : cols) out += fmt::format("{:>9}", cell(kind, mode, g)->n);
    out += '\n';
  }
  return out;
}

EvalResult evaluate(const Manifest& manifest, const std::vector<Response>& responses) {
  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < manifest.records.size(); ++i) index.emplace(manifest.records[i].id, i);

  std::vector<std::vector<const Response*>> by_question(manifest.records.size());
  EvalResult result;
  std::set<std::string> unknown;
  for (const auto& r : responses) {
    const auto it = index.find(r.id);
    if (it == index.end()) {
      unknown.insert(r.id);
      continue;
    }
    by_question[it->second].push_back(&r);
  }
  result.unknown_ids.assign(unknown.begin(), unknown.end());

  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    const Question& q = manifest.records[i];
    auto& group = by_question[i];
    if (group.empty()) {
      result.records.push_back(score_response(q, ""));
      ++result.missing;
      continue;
    }
    std::sort(group.begin(), group.end(), [](const Response* a, const Response* b) {
      return std::tie(a->step, a->raw_text) < std::tie(b->step, b->raw_text);
    });
    for (const Response* r : group) {
      EvalRecord rec = score_response(q, r->raw_text);
      rec.step = r->step;
      result.records.push_back(std::move(rec));
    }
  }
  for (const auto& rec : result.records) result.table.add(rec);
  return result;
}

// ---------------------------------------------------------------------------

std::size_t count_keyword(std::string_view text, std::string_view term) {
  struct Word {
    std::size_t begin;
    std::size_t end;
  };
  auto lower = [](char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); };

  std::vector<std::string> term_words;
  for (std::size_t i = 0; i < term.size();) {
    const auto sp = std::min(term.find(' ', i), term.size());
    if (sp > i) term_words.emplace_back(term.substr(i, sp - i));
    i = sp + 1;
  }
  if (term_words.empty()) return 0;
  for (auto& w : term_words) std::transform(w.begin(), w.end(), w.begin(), lower);

  std::vector<Word> words;
  for (std::size_t i = 0; i < text.size();) {
    if (!is_ascii_word(text[i])) {
      ++i;
      continue;
    }
    const std::size_t b = i;
    while (i < text.size() && is_ascii_word(text[i])) ++i;
    words.push_back({b, i});
  }

  auto word_equals = [&](const Word& w, const std::string& want) {
    if (w.end - w.begin != want.size()) return false;
    for (std::size_t k = 0; k < want.size(); ++k) {
      if (lower(text[w.begin + k]) != want[k]) return false;
    }
    return true;
  };

  std::size_t matches = 0;
  for (std::size_t k = 0; k + term_words.size() <= words.size(); ++k) {
    bool ok = true;
    for (std::size_t j = 0; j < term_words.size() && ok; ++j) {
      ok = word_equals(words[k + j], term_words[j]);
      if (ok && j > 0) {
        // Consecutive words of the term must be separated by exactly one space.
        ok = words[k + j].begin == words[k + j - 1].end + 1 && text[words[k + j - 1].end] == ' ';
      }
    }
    matches += ok;
  }
  return matches;
}

std::vector<double> exponential_smoothing(const std::vector<double>& xs, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument(fmt::format("smoothing alpha {} outside (0, 1]", alpha));
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(out.empty() ? x : alpha * x + (1.0 - alpha) * out.back());
  return out;
}

Analysis analyze(const std::vector<Response>& responses, const KeywordSpec& keywords, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument(fmt::format("smoothing alpha {} outside (0, 1]", alpha));
  std::map<std::string, std::vector<const Response*>> groups;
  for (const auto& r : responses) groups[r.step.value_or("0")].push_back(&r);

  std::vector<std::string> order;
  for (const auto& [step, _] : groups) order.push_back(step);
  if (std::all_of(order.begin(), order.end(), is_integer)) {
    std::sort(order.begin(), order.end(), [](const std::string& a, const std::string& b) {
      return std::stoll(a) < std::stoll(b);
    });
  }

  Analysis out;
  out.alpha = alpha;
  std::vector<double> bt, bc, chars, tokens;
  for (const auto& step : order) {
    StepStats s;
    s.step = step;
    const auto& group = groups[step];
    s.responses = group.size();
    std::size_t bt_hits = 0;
    std::size_t bc_hits = 0;
    double c_sum = 0.0;
    double t_sum = 0.0;
    for (const Response* r : group) {
      for (const auto& term : keywords.backtracking) {
        const auto n = count_keyword(r->raw_text, term);
        bt_hits += n;
        s.keyword_counts[term] += n;
      }
      for (const auto& term : keywords.backward_chaining) {
        const auto n = count_keyword(r->raw_text, term);
        bc_hits += n;
        s.keyword_counts[term] += n;
      }
      c_sum += static_cast<double>(utf8_length(r->raw_text));
      t_sum += static_cast<double>(whitespace_token_count(r->raw_text));
    }
    const double n = static_cast<double>(s.responses);
    s.backtracking = static_cast<double>(bt_hits) / n;
    s.backward_chaining = static_cast<double>(bc_hits) / n;
    s.mean_chars = c_sum / n;
    s.mean_tokens = t_sum / n;
    bt.push_back(s.backtracking);
    bc.push_back(s.backward_chaining);
    chars.push_back(s.mean_chars);
    tokens.push_back(s.mean_tokens);
    out.steps.push_back(std::move(s));
  }
  auto put = [&](const std::string& name, std::vector<double> xs) {
    out.series[name + "_smoothed"] = exponential_smoothing(xs, alpha);
    out.series[name] = std::move(xs);
  };
  put("backtracking", std::move(bt));
  put("backward_chaining", std::move(bc));
  put("mean_chars", std::move(chars));
  put("mean_tokens", std::move(tokens));
  return out;
}

}  // namespace jigsaw
