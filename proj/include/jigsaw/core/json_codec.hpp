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

#include <json.hpp>

#include "jigsaw/core/grpo.hpp"
#include "jigsaw/core/harness.hpp"
#include "jigsaw/core/question.hpp"
#include "jigsaw/core/scoring.hpp"

namespace jigsaw::codec {

using Json = nlohmann::ordered_json;

Json to_json(const GridSpec& grid);
GridSpec grid_from_json(const Json& j);  // [m, n] or "MxN"

Json to_json(const PixelRect& r);
PixelRect rect_from_json(const Json& j);

/// [[2,1],[4,3]] | "B" | [x1,y1,x2,y2]
Json truth_to_json(const GroundTruth& truth, const GridSpec& grid);
/// Accepts the forms above; grids may also be flat or an answer string.
GroundTruth truth_from_json(const Json& j, TaskKind kind, const GridSpec& grid);

Json to_json(const Question& q);
/// Throws InvalidInput on missing or mistyped fields.
Question question_from_json(const Json& j);

Json to_json(const RewardBreakdown& r);
Json to_json(const TagCompliance& t);
Json to_json(const EvalRecord& r);
Json to_json(const EvalTable& table);
Json to_json(const Analysis& a);

/// Harness config from the keys used by the CLI flags: corpus, out, kind
/// (string or list), grid or mix, mode, count, seed, transpose50, mask_gap,
/// patch_scale, box_semantics, jobs. Throws ConfigError.
DatasetConfig dataset_config_from_json(const Json& j);

/// Question carrying only what scoring needs: kind, mode, grid, ground_truth.
/// Throws InvalidInput.
Question inline_question_from_json(const Json& j);

/// Reads optional keys of a learning-signal / objective config.
grpo::Config grpo_config_from_json(const Json& j, int group_size);

}  // namespace jigsaw::codec
