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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jigsaw/core/imaging.hpp"
#include "jigsaw/core/question.hpp"
#include "jigsaw/core/rng.hpp"
#include "jigsaw/core/scoring.hpp"

namespace jigsaw {

// ---------------------------------------------------------------------------
// Dataset generation

struct GridShare {
  GridSpec grid;
  double ratio = 1.0;
};

struct DatasetConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path out_dir;
  std::vector<TaskKind> kinds{TaskKind::kPair};
  std::vector<GridShare> grids{{GridSpec(2, 1), 1.0}};
  PromptMode mode = PromptMode::kThinking;
  int count = 100;  // per kind, split across grids by ratio
  std::uint64_t seed = 0;
  bool transpose_50 = false;
  MaskConfig mask;
  double patch_scale = 0.5;
  BoxSemantics box_semantics = BoxSemantics::kCurrentOccupantOrigin;
  int jobs = 1;

  /// Throws ConfigError.
  void validate() const;
};

/// "3x1:0.5,4x1:0.5" -> shares. Throws ConfigError.
std::vector<GridShare> parse_mix(std::string_view text);

/// Largest-remainder split of `count` by `ratios` (ties go to the earlier
/// entry). The result always sums to `count`.
std::vector<int> allocate_counts(int count, const std::vector<double>& ratios);

/// Seed of item `index` within the (kind, grid) stream of a dataset.
std::uint64_t item_seed(std::uint64_t dataset_seed, TaskKind kind, const GridSpec& grid, int index);

/// Readable corpus images (sorted by path) plus files that failed to load.
struct Corpus {
  std::vector<std::filesystem::path> images;
  std::vector<std::pair<std::filesystem::path, std::string>> skipped;
};

/// Throws IoError when the directory is missing or holds no readable image.
Corpus scan_corpus(const std::filesystem::path& dir);

struct Manifest {
  std::vector<Question> records;
  friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct BuildResult {
  Manifest manifest;
  std::filesystem::path manifest_path;
  std::vector<std::pair<std::filesystem::path, std::string>> skipped;
};

/// Writes <out>/manifest.jsonl, <out>/images/<id>.png and
/// <out>/build_report.json. Output is identical for any `jobs` value.
BuildResult build_dataset(const DatasetConfig& config);

/// Rebuilds a question from its stored generation metadata alone.
Question regenerate_question(const Question& stored);

/// Question with no image behind it, for baselines and tests. Box questions
/// use a `width` x `height` canvas.
Question make_synthetic_question(TaskKind kind, PromptMode mode, const GridSpec& grid, std::uint64_t seed,
                                 int width = 448, int height = 448);

// ---------------------------------------------------------------------------
// Manifest and response files (one JSON object per line)

std::string question_to_json_line(const Question& q);
/// Throws InvalidInput on malformed records.
Question question_from_json_line(std::string_view line);

void save_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest load_manifest(const std::filesystem::path& path);

struct Response {
  std::string id;
  std::string raw_text;
  std::optional<std::string> step;
};

std::vector<Response> load_responses(const std::filesystem::path& path);
void save_responses(const std::vector<Response>& responses, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Agents

/// Uniform guess in the prescribed format. Box guesses have the
/// ground-truth patch size and lie inside the image.
std::string random_agent(const Question& question, Rng& rng);

/// The ground truth in the prescribed format.
std::string oracle_agent(const Question& question);

/// Wraps an answer in canonical thinking tags when the mode asks for them.
std::string wrap_answer(std::string_view answer, PromptMode mode, std::string_view thought = "Let me compare the patches.");

// ---------------------------------------------------------------------------
// Evaluation

struct TableCell {
  std::size_t n = 0;
  double metric_sum = 0.0;  // eval_value summed
  double reward_sum = 0.0;  // total reward summed
  double percent() const noexcept { return n == 0 ? 0.0 : 100.0 * metric_sum / static_cast<double>(n); }
};

/// Cells keyed by (kind, mode) row and grid column. AVG is the unweighted
/// mean of a row's grid columns.
class EvalTable {
 public:
  void add(const EvalRecord& record);

  std::vector<std::pair<TaskKind, PromptMode>> rows() const;
  /// Columns in table order: fewer pieces first, then taller grids first.
  std::vector<GridSpec> columns(TaskKind kind, PromptMode mode) const;
  const TableCell* cell(TaskKind kind, PromptMode mode, const GridSpec& grid) const;
  double average(TaskKind kind, PromptMode mode) const;

  /// Aligned text, percentages to two decimals.
  std::string to_text(std::string_view method = "Evaluated") const;

 private:
  struct Key {
    int kind;
    int mode;
    int rows;
    int cols;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, TableCell> cells_;
};

struct EvalResult {
  std::vector<EvalRecord> records;
  EvalTable table;
  std::vector<std::string> unknown_ids;
  std::size_t missing = 0;  // questions that had no response
};

/// Scores every response against its question. Questions without a response
/// are scored as unparseable; responses with unknown ids are reported and
/// excluded. Records are ordered by manifest position and then by
/// (step, raw_text), so the result does not depend on response order.
EvalResult evaluate(const Manifest& manifest, const std::vector<Response>& responses);

// ---------------------------------------------------------------------------
// Training-dynamics analysis

struct KeywordSpec {
  std::vector<std::string> backtracking{"recheck", "reverify", "reevaluate", "reexamine", "reexmamine"};
  std::vector<std::string> backward_chaining{"work backwards"};
};

/// Case-insensitive whole-word matches of `term`; words of a multi-word term
/// must be separated by exactly one space.
std::size_t count_keyword(std::string_view text, std::string_view term);

/// s_0 = x_0, s_t = alpha * x_t + (1 - alpha) * s_{t-1}. alpha in (0, 1].
std::vector<double> exponential_smoothing(const std::vector<double>& xs, double alpha);

struct StepStats {
  std::string step;
  std::size_t responses = 0;
  double backtracking = 0.0;       // matches per response
  double backward_chaining = 0.0;  // matches per response
  double mean_chars = 0.0;
  double mean_tokens = 0.0;
  std::map<std::string, std::size_t> keyword_counts;
};

struct Analysis {
  double alpha = 0.1;
  std::vector<StepStats> steps;
  std::map<std::string, std::vector<double>> series;  // raw and "<name>_smoothed"
};

/// Groups responses by step (numeric order when every step is an integer,
/// otherwise lexicographic; missing steps count as "0").
Analysis analyze(const std::vector<Response>& responses, const KeywordSpec& keywords, double alpha);

}  // namespace jigsaw
