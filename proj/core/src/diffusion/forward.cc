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

#include "maskdiff/diffusion/forward.h"

#include "diffusion/checks.h"
#include "maskdiff/core/errors.h"

namespace maskdiff {

StepAlphas step_alphas(const NoiseSchedule& schedule, double s, double t) {
  if (!(s < t)) throw ArgumentError("reverse step requires s < t");
  return {schedule.alpha(s), schedule.alpha(t)};
}

StateDistribution forward_marginal(StateId x, double alpha_t,
                                   const MixturePrior& prior) {
  const VocabSpec& vocab = prior.vocab();
  internal::check_clean(vocab, x, "x");
  internal::check_alpha(alpha_t, "alpha_t");
  StateDistribution q(vocab.state_count());
  q[vocab.mask_id()] = (1.0 - alpha_t) * (1.0 - prior.rho());
  q[vocab.trigger_id()] = (1.0 - alpha_t) * prior.rho();
  q[x] = alpha_t;
  return q;
}

StateDistribution forward_transition(StateId z_s, double alpha_s,
                                     double alpha_t,
                                     const MixturePrior& prior) {
  const VocabSpec& vocab = prior.vocab();
  internal::check_state(vocab, z_s, "z_s");
  internal::check_step(alpha_s, alpha_t);
  const double keep = alpha_t / alpha_s;
  StateDistribution q(vocab.state_count());
  q[vocab.mask_id()] = (1.0 - keep) * (1.0 - prior.rho());
  q[vocab.trigger_id()] = (1.0 - keep) * prior.rho();
  q[z_s] += keep;
  return q;
}

StateId draw_forward_state(StateId x, double alpha_t, const MixturePrior& prior,
                           Rng& rng) {
  const double u = rng.uniform();
  if (u < alpha_t) return x;
  if (u < alpha_t + (1.0 - alpha_t) * prior.rho()) {
    return prior.vocab().trigger_id();
  }
  return prior.vocab().mask_id();
}

LatentSequence sample_forward(std::span<const StateId> sequence, double t,
                              const NoiseSchedule& schedule,
                              const MixturePrior& prior, Rng& rng) {
  const double alpha_t = schedule.alpha(t);
  LatentSequence z;
  z.t = t;
  z.states.reserve(sequence.size());
  for (StateId x : sequence) {
    internal::check_clean(prior.vocab(), x, "sequence token");
    z.states.push_back(draw_forward_state(x, alpha_t, prior, rng));
  }
  return z;
}

LatentSequence sample_forward(std::span<const StateId> sequence, double t,
                              const NoiseSchedule& schedule,
                              const MixturePrior& prior, std::uint64_t seed) {
  Rng rng(seed);
  return sample_forward(sequence, t, schedule, prior, rng);
}

}  // namespace maskdiff
