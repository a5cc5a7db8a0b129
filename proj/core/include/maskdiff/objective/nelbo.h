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

#ifndef MASKDIFF_OBJECTIVE_NELBO_H_
#define MASKDIFF_OBJECTIVE_NELBO_H_

#include <cstdint>
#include <span>

#include "maskdiff/core/schedule.h"
#include "maskdiff/core/time_grid.h"
#include "maskdiff/core/vocab.h"
#include "maskdiff/denoiser/network.h"
#include "maskdiff/diffusion/prior.h"

namespace maskdiff {

// Discrete-time negative ELBO of one sequence, summed over positions.
struct LossBreakdown {
  double reconstruction = 0.0;
  double diffusion = 0.0;
  double prior_kl = 0.0;
  double total = 0.0;
  // Positions whose reconstruction or KL term hit the probability floor.
  int floored_terms = 0;
};

// Terminal term of one position: KL(pi' || q(z_T | x)) = -log(1 - alpha_T).
// The divergence is taken from the base distribution because q(z_T | x)
// keeps mass alpha_T on x, which pi' does not cover.
double terminal_prior_kl(double alpha_terminal, const MixturePrior& prior);

// Grid nodes map affinely onto [t_min, t_max]. The reconstruction term is
// -log x_theta(x) at terminal positions of z ~ q(. | x) at the first node;
// each step i contributes sum over positions of
// KL(q(z_{i-1} | z_i, x) || p_theta(z_{i-1} | z_i)) at one fresh draw of
// z_i; the prior term is L * terminal_prior_kl at the last node.
LossBreakdown nelbo_terms(const Denoiser& denoiser,
                          std::span<const StateId> sequence,
                          const TimeGrid& grid, const MixturePrior& prior,
                          const NoiseSchedule& schedule, std::uint64_t seed);

}  // namespace maskdiff

#endif  // MASKDIFF_OBJECTIVE_NELBO_H_
