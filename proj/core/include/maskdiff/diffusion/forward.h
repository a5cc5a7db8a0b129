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

#ifndef MASKDIFF_DIFFUSION_FORWARD_H_
#define MASKDIFF_DIFFUSION_FORWARD_H_

#include <cstdint>
#include <span>
#include <vector>

#include "maskdiff/core/random.h"
#include "maskdiff/core/schedule.h"
#include "maskdiff/core/vocab.h"
#include "maskdiff/diffusion/distribution.h"
#include "maskdiff/diffusion/prior.h"

namespace maskdiff {

// Augmented-state latent z_t for a whole sequence.
struct LatentSequence {
  std::vector<StateId> states;
  double t = 0.0;
};

// Retention probabilities at the two ends of a reverse step s < t.
struct StepAlphas {
  double s;
  double t;
};

// Evaluates the schedule at s < t; ArgumentError when s >= t.
StepAlphas step_alphas(const NoiseSchedule& schedule, double s, double t);

// q(z_t | x) = alpha_t x + (1 - alpha_t) pi'.
StateDistribution forward_marginal(StateId x, double alpha_t,
                                   const MixturePrior& prior);

// q(z_t | z_s) = alpha_{t|s} z_s + (1 - alpha_{t|s}) pi', with
// alpha_{t|s} = alpha_t / alpha_s. Requires alpha_t < alpha_s.
StateDistribution forward_transition(StateId z_s, double alpha_s,
                                     double alpha_t,
                                     const MixturePrior& prior);

// Draws one position of q(z_t | x). Consumes exactly one uniform.
StateId draw_forward_state(StateId x, double alpha_t, const MixturePrior& prior,
                           Rng& rng);

// Corrupts every position independently at schedule time t.
LatentSequence sample_forward(std::span<const StateId> sequence, double t,
                              const NoiseSchedule& schedule,
                              const MixturePrior& prior, Rng& rng);
LatentSequence sample_forward(std::span<const StateId> sequence, double t,
                              const NoiseSchedule& schedule,
                              const MixturePrior& prior, std::uint64_t seed);

}  // namespace maskdiff

#endif  // MASKDIFF_DIFFUSION_FORWARD_H_
