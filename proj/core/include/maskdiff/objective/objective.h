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

#ifndef MASKDIFF_OBJECTIVE_OBJECTIVE_H_
#define MASKDIFF_OBJECTIVE_OBJECTIVE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "maskdiff/core/random.h"
#include "maskdiff/core/schedule.h"
#include "maskdiff/core/vocab.h"
#include "maskdiff/denoiser/loss.h"
#include "maskdiff/denoiser/network.h"
#include "maskdiff/diffusion/prior.h"

namespace maskdiff {

// Monte Carlo weight of one draw t ~ Uniform(t_min, t_max):
//   (t_max - t_min) * (-alpha_dot(t)) / (1 - alpha(t)),
// so that the sample mean estimates the integral over [t_min, t_max].
double corruption_weight(const NoiseSchedule& schedule, double t);

// Draws t, then corrupts every position of x with the prior's terminal
// distribution. Terminal positions are indicated. A position of x holding
// the trigger state (planted by ShadowMask poisoning) stays in {m, g} and is
// never indicated. Consumes one uniform for t and one per position.
TrainingExample draw_example(std::span<const StateId> x,
                             const MixturePrior& prior,
                             const NoiseSchedule& schedule, Rng& rng);
// Same with a given t (one uniform per position).
TrainingExample draw_example_at(std::span<const StateId> x,
                                const MixturePrior& prior,
                                const NoiseSchedule& schedule, double t,
                                Rng& rng);

// Batch times t_b = from_unit((b + u) / B) from one uniform u: each stays
// marginally uniform on [t_min, t_max] while the batch covers the interval
// evenly.
std::vector<double> stratified_times(const NoiseSchedule& schedule,
                                     int batch_size, Rng& rng);

// Monte Carlo estimate of the continuous-time objective
//   E_t E_z [ w(t) * sum over l with z^l in {m, g} of -log x_theta(z, t)_x^l ]
// averaged over the batch; one (t, z) draw per sequence from Rng(seed).
// Throws ArgumentError on an empty batch.
double bd_loss(const Denoiser& denoiser, std::span<const TokenSequence> batch,
               const MixturePrior& prior, const NoiseSchedule& schedule,
               std::uint64_t seed);

// The clean objective: bd_loss with rho = 0.
double mdlm_loss(const Denoiser& denoiser,
                 std::span<const TokenSequence> batch,
                 const NoiseSchedule& schedule, std::uint64_t seed);

// Trapezoidal quadrature over [t_min, t_max] of
//   (-alpha_dot) [(1 - rho)(-log p_mask) + rho (-log p_trigger)]
// with the denoiser probabilities held constant in t.
double single_token_closed_form(double p_mask, double p_trigger, double rho,
                                const NoiseSchedule& schedule,
                                int nodes = 1024);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Unbiased estimator of single_token_closed_form from num_samples draws.
McEstimate single_token_mc(double p_mask, double p_trigger, double rho,
                           const NoiseSchedule& schedule, int num_samples,
                           std::uint64_t seed);

}  // namespace maskdiff

#endif  // MASKDIFF_OBJECTIVE_OBJECTIVE_H_
