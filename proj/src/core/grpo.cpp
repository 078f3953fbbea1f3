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

#include "jigsaw/core/grpo.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "jigsaw/core/errors.hpp"

namespace jigsaw::grpo {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument(fmt::format("non-finite value in {}", what));
  }
}

}  // namespace

void Config::validate() const {
  if (!(clip_eps > 0.0 && clip_eps < 1.0)) throw InvalidArgument(fmt::format("clip_eps {} outside (0, 1)", clip_eps));
  if (!(kl_coeff >= 0.0) || !std::isfinite(kl_coeff)) throw InvalidArgument("kl_coeff must be finite and >= 0");
  if (group_size < 2) throw InvalidArgument("group_size must be at least 2");
  if (inner_iterations < 1) throw InvalidArgument("inner_iterations must be at least 1");
  if (!(std_floor > 0.0) || !std::isfinite(std_floor)) throw InvalidArgument("std_floor must be finite and > 0");
}

std::vector<double> group_advantages(std::span<const double> rewards, const Config& cfg) {
  cfg.validate();
  if (rewards.size() != static_cast<std::size_t>(cfg.group_size)) {
    throw InvalidArgument(fmt::format("group has {} rewards, expected {}", rewards.size(), cfg.group_size));
  }
  require_finite(rewards, "rewards");

  std::vector<double> adv(rewards.size(), 0.0);
  const auto [lo, hi] = std::minmax_element(rewards.begin(), rewards.end());
  if (*lo == *hi) return adv;

  const double n = static_cast<double>(rewards.size());
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= n;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double std_dev = std::sqrt(var / n);
  for (std::size_t i = 0; i < rewards.size(); ++i) adv[i] = (rewards[i] - mean) / (std_dev + cfg.std_floor);
  return adv;
}

double kl_term(double current, double ref, KlEstimator estimator) noexcept {
  const double d = ref - current;
  return estimator == KlEstimator::kK3 ? std::expm1(d) - d : -d;
}

Objective objective(const RolloutGroup& group, std::span<const double> advantages, const Config& cfg) {
  cfg.validate();
  const std::size_t g = group.samples.size();
  if (g != static_cast<std::size_t>(cfg.group_size)) {
    throw InvalidArgument(fmt::format("group has {} samples, expected {}", g, cfg.group_size));
  }
  if (advantages.size() != g) throw InvalidArgument("advantages and samples differ in length");
  require_finite(advantages, "advantages");

  Objective out;
  out.grad.resize(g);
  const double lo = 1.0 - cfg.clip_eps;
  const double hi = 1.0 + cfg.clip_eps;

  for (std::size_t i = 0; i < g; ++i) {
    const auto& s = group.samples[i];
    const std::size_t t_len = s.current.size();
    if (s.old.size() != t_len || s.ref.size() != t_len || (!s.mask.empty() && s.mask.size() != t_len)) {
      throw InvalidArgument(fmt::format("sample {}: logprob sequences differ in length", i));
    }
    require_finite(s.current, "current logprobs");
    require_finite(s.old, "old logprobs");
    require_finite(s.ref, "reference logprobs");

    std::size_t valid = 0;
    for (std::size_t t = 0; t < t_len; ++t) valid += s.mask.empty() || s.mask[t] != 0;
    out.grad[i].assign(t_len, 0.0);
    if (valid == 0) continue;

    const double a = advantages[i];
    const double scale = cfg.aggregation == Aggregation::kSampleMean ? 1.0 / static_cast<double>(valid) : 1.0;
    const double weight = scale / static_cast<double>(g);
    double sample_sum = 0.0;
    for (std::size_t t = 0; t < t_len; ++t) {
      if (!s.mask.empty() && s.mask[t] == 0) continue;
      const double ratio = std::exp(s.current[t] - s.old[t]);
      const double unclipped = ratio * a;
      double term = unclipped;
      double dterm = ratio * a;  // d term / d current
      if (cfg.clip_ratio) {
        const double clipped = std::clamp(ratio, lo, hi) * a;
        if (clipped < unclipped) {
          term = clipped;
          dterm = 0.0;  // the clipped branch only wins once ratio is outside [lo, hi]
        }
      }
      const double kl = kl_term(s.current[t], s.ref[t], cfg.kl_estimator);
      const double dkl = cfg.kl_estimator == KlEstimator::kK3 ? -std::expm1(s.ref[t] - s.current[t]) : 1.0;
      sample_sum += -term + cfg.kl_coeff * kl;
      out.grad[i][t] = weight * (-dterm + cfg.kl_coeff * dkl);
    }
    out.loss += sample_sum * scale;
  }
  out.loss /= static_cast<double>(g);
  return out;
}

}  // namespace jigsaw::grpo
