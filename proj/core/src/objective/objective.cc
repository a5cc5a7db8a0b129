// Copyright 2026 The maskdiff Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "maskdiff/objective/objective.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "maskdiff/core/errors.h"
#include "maskdiff/diffusion/forward.h"

namespace maskdiff {
namespace {

void check_probability(double p, const char* what) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw ArgumentError(std::string(what) + " must lie in (0, 1], got " +
                        std::to_string(p));
  }
}

}  // namespace

double corruption_weight(const NoiseSchedule& schedule, double t) {
  return schedule.width() * (-schedule.alpha_dot(t)) / (1.0 - schedule.alpha(t));
}

TrainingExample draw_example(std::span<const StateId> x,
                             const MixturePrior& prior,
                             const NoiseSchedule& schedule, Rng& rng) {
  const double t = rng.uniform(schedule.t_min(), schedule.t_max());
  return draw_example_at(x, prior, schedule, t, rng);
}

TrainingExample draw_example_at(std::span<const StateId> x,
                                const MixturePrior& prior,
                                const NoiseSchedule& schedule, double t,
                                Rng& rng) {
  if (!schedule.contains(t)) {
    throw DomainError("t = " + std::to_string(t) + " outside the schedule");
  }
  TrainingExample ex;
  ex.t = t;
  ex.weight = corruption_weight(schedule, ex.t);
  ex.target.assign(x.begin(), x.end());
  const double alpha = schedule.alpha(ex.t);
  ex.latent.reserve(x.size());
  ex.indicated.reserve(x.size());
  const VocabSpec& vocab = prior.vocab();
  for (StateId token : x) {
    if (token == vocab.trigger_id()) {
      // A planted trigger state: Cat(alpha g + (1 - alpha) pi') never leaves
      // {m, g}, and the position carries no clean target.
      const bool stays = rng.uniform() < alpha + (1.0 - alpha) * prior.rho();
      ex.latent.push_back(stays ? vocab.trigger_id() : vocab.mask_id());
      ex.indicated.push_back(false);
      continue;
    }
    if (!vocab.is_clean(token)) {
      throw ArgumentError("training sequence contains the mask state");
    }
    const StateId z = draw_forward_state(token, alpha, prior, rng);
    ex.latent.push_back(z);
    ex.indicated.push_back(vocab.is_terminal(z));
  }
  return ex;
}

std::vector<double> stratified_times(const NoiseSchedule& schedule,
                                     int batch_size, Rng& rng) {
  if (batch_size < 1) throw ArgumentError("batch_size must be >= 1");
  const double u = rng.uniform();
  std::vector<double> times(batch_size);
  for (int b = 0; b < batch_size; ++b) {
    times[b] = schedule.from_unit((b + u) / batch_size);
  }
  return times;
}

double bd_loss(const Denoiser& denoiser, std::span<const TokenSequence> batch,
               const MixturePrior& prior, const NoiseSchedule& schedule,
               std::uint64_t seed) {
  if (batch.empty()) throw ArgumentError("bd_loss: empty batch");
  Rng rng(seed);
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (const TokenSequence& x : batch) {
    const TrainingExample ex = draw_example(x, prior, schedule, rng);
    if (std::none_of(ex.indicated.begin(), ex.indicated.end(),
                     [](bool b) { return b; })) {
      continue;
    }
    const DenoiserOutput out = denoiser.predict(ex.latent, ex.t);
    double nll = 0.0;
    for (std::size_t l = 0; l < x.size(); ++l) {
      if (!ex.indicated[l]) continue;
      nll -= std::log(std::max(out.prob(static_cast<int>(l), x[l]),
                               kLogProbFloor));
    }
    total += inv_batch * (ex.weight * nll);
  }
  return total;
}

double mdlm_loss(const Denoiser& denoiser,
                 std::span<const TokenSequence> batch,
                 const NoiseSchedule& schedule, std::uint64_t seed) {
  return bd_loss(denoiser, batch, MixturePrior::Clean(denoiser.vocab()),
                 schedule, seed);
}

double single_token_closed_form(double p_mask, double p_trigger, double rho,
                                const NoiseSchedule& schedule, int nodes) {
  check_probability(p_mask, "p_mask");
  check_probability(p_trigger, "p_trigger");
  if (!(rho >= 0.0 && rho <= 1.0)) throw ArgumentError("rho outside [0, 1]");
  if (nodes < 2) throw ArgumentError("quadrature needs at least 2 nodes");
  const double cross_entropy =
      (1.0 - rho) * -std::log(p_mask) + rho * -std::log(p_trigger);
  const double h = schedule.width() / (nodes - 1);
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double t = schedule.t_min() + i * h;
    const double f =
        -schedule.alpha_dot(std::min(t, schedule.t_max())) * cross_entropy;
    sum += (i == 0 || i == nodes - 1) ? 0.5 * f : f;
  }
  return h * sum;
}

McEstimate single_token_mc(double p_mask, double p_trigger, double rho,
                           const NoiseSchedule& schedule, int num_samples,
                           std::uint64_t seed) {
  check_probability(p_mask, "p_mask");
  check_probability(p_trigger, "p_trigger");
  if (num_samples < 1) throw ArgumentError("num_samples must be >= 1");
  const VocabSpec vocab(1);
  const MixturePrior prior(vocab, rho);
  Rng rng(seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < num_samples; ++i) {
    const double t = rng.uniform(schedule.t_min(), schedule.t_max());
    const StateId z = draw_forward_state(0, schedule.alpha(t), prior, rng);
    double value = 0.0;
    if (z == vocab.mask_id()) {
      value = corruption_weight(schedule, t) * -std::log(p_mask);
    } else if (z == vocab.trigger_id()) {
      value = corruption_weight(schedule, t) * -std::log(p_trigger);
    }
    sum += value;
    sum_sq += value * value;
  }
  const double n = num_samples;
  const double mean = sum / n;
  const double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1))
                           : 0.0;
  return {mean, std::sqrt(var / n)};
}

}  // namespace maskdiff
