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

#ifndef MASKDIFF_DIFFUSION_POSTERIOR_H_
#define MASKDIFF_DIFFUSION_POSTERIOR_H_

#include "maskdiff/core/vocab.h"
#include "maskdiff/diffusion/distribution.h"
#include "maskdiff/diffusion/prior.h"

namespace maskdiff {

// Reverse-step masses out of a terminal state z_t in {m, g}: onto the mask,
// onto the trigger, and onto the clean token (or the denoiser's clean
// distribution). With b = 1 - alpha, b_ts = 1 - alpha_t / alpha_s:
//   z_t = m: [b_s (1 - rho b_ts),  rho b_s b_ts,        alpha_s - alpha_t] / b_t
//   z_t = g: [(1-rho) b_s b_ts,    b_s (1-(1-rho) b_ts), alpha_s - alpha_t] / b_t
struct TerminalStepMasses {
  double to_mask;
  double to_trigger;
  double to_clean;
};

TerminalStepMasses terminal_step_masses(StateId z_t, double alpha_s,
                                        double alpha_t,
                                        const MixturePrior& prior);

// Closed-form q(z_s | z_t, x) under the mixture-prior forward process.
// A clean z_t is carried over unchanged.
StateDistribution true_posterior(StateId z_t, StateId x, double alpha_s,
                                 double alpha_t, const MixturePrior& prior);

// The same posterior by enumeration: weights q(z_s | x) q(z_t | z_s) over
// every augmented z_s and normalizes. Throws InconsistentStateError when
// z_t is unreachable from x.
StateDistribution bayes_oracle_posterior(StateId z_t, StateId x,
                                         double alpha_s, double alpha_t,
                                         const MixturePrior& prior);

// Learned reverse kernel: the posterior with x replaced by the denoiser's
// clean-token distribution. Throws ConstraintViolation if the denoiser puts
// mass on m or g.
StateDistribution reverse_kernel(StateId z_t,
                                 const StateDistribution& denoiser_probs,
                                 double alpha_s, double alpha_t,
                                 const MixturePrior& prior);

}  // namespace maskdiff

#endif  // MASKDIFF_DIFFUSION_POSTERIOR_H_
