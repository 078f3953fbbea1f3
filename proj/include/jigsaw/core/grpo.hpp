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

#include <span>
#include <vector>

namespace jigsaw::grpo {

/// Per-token KL penalty estimator against the reference policy, with
/// d = ref - cur:  kK3 = exp(d) - d - 1 (non-negative),  kK1 = -d.
enum class KlEstimator { kK3, kK1 };

/// How token terms are reduced to one loss value.
/// kSampleMean: mean over each sample's valid tokens, then mean over the group.
/// kTokenSum: sum over each sample's valid tokens, then mean over the group.
enum class Aggregation { kSampleMean, kTokenSum };

struct Config {
  int group_size = 8;
  double clip_eps = 0.2;
  double kl_coeff = 0.04;
  int inner_iterations = 1;
  double std_floor = 1e-4;
  bool clip_ratio = true;
  KlEstimator kl_estimator = KlEstimator::kK3;
  Aggregation aggregation = Aggregation::kSampleMean;

  /// Throws InvalidArgument unless clip_eps in (0, 1), kl_coeff >= 0,
  /// group_size >= 2, inner_iterations >= 1 and std_floor > 0.
  void validate() const;
};

/// Token log-probabilities for one sampled completion under the current,
/// behaviour (old) and reference policies. mask[t] == 0 excludes token t.
struct SampleLogprobs {
  std::vector<double> current;
  std::vector<double> old;
  std::vector<double> ref;
  std::vector<unsigned char> mask;  // empty means every token is valid
};

struct RolloutGroup {
  std::vector<double> rewards;
  std::vector<SampleLogprobs> samples;
};

/// A_i = (r_i - mean r) / (std r + std_floor), population std. A group of
/// identical rewards yields exact zeros. Throws InvalidArgument when the
/// size differs from cfg.group_size or a reward is not finite.
std::vector<double> group_advantages(std::span<const double> rewards, const Config& cfg);

struct Objective {
  double loss = 0.0;
  /// d loss / d current[i][t]; zero at masked tokens.
  std::vector<std::vector<double>> grad;
};

/// Clipped surrogate with KL penalty:
///   ratio = exp(cur - old)
///   term  = min(ratio * A, clip(ratio, 1 - eps, 1 + eps) * A)
///   token = -term + beta * kl
/// reduced per cfg.aggregation. Samples with no valid token contribute 0 but
/// still count towards the group mean. Throws InvalidArgument on shape
/// mismatches or non-finite inputs.
Objective objective(const RolloutGroup& group, std::span<const double> advantages, const Config& cfg);

/// Value of the KL estimator for a single token.
double kl_term(double current, double ref, KlEstimator estimator) noexcept;

}  // namespace jigsaw::grpo
