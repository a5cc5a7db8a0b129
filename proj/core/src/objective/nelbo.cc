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

#include "maskdiff/objective/nelbo.h"

#include <cmath>

#include "maskdiff/core/errors.h"
#include "maskdiff/core/random.h"
#include "maskdiff/denoiser/loss.h"
#include "maskdiff/diffusion/distribution.h"
#include "maskdiff/diffusion/forward.h"
#include "maskdiff/diffusion/posterior.h"

namespace maskdiff {

double terminal_prior_kl(double alpha_terminal, const MixturePrior& prior) {
  const StateDistribution base = prior.terminal_distribution();
  // Any clean token works: the base puts no mass on clean tokens.
  const StateDistribution q = forward_marginal(0, alpha_terminal, prior);
  return kl_divergence(base, q);
}

LossBreakdown nelbo_terms(const Denoiser& denoiser,
                          std::span<const StateId> sequence,
                          const TimeGrid& grid, const MixturePrior& prior,
                          const NoiseSchedule& schedule, std::uint64_t seed) {
  const VocabSpec& vocab = prior.vocab();
  if (static_cast<int>(sequence.size()) != denoiser.seq_len()) {
    throw ArgumentError("sequence length does not match the denoiser");
  }
  Rng rng(seed);
  LossBreakdown out;
  const int length = static_cast<int>(sequence.size());

  const double t0 = schedule.from_unit(grid.node(0));
  const LatentSequence z0 = sample_forward(sequence, t0, schedule, prior, rng);
  {
    const DenoiserOutput pred = denoiser.predict(z0.states, t0);
    for (int l = 0; l < length; ++l) {
      if (!vocab.is_terminal(z0.states[l])) continue;
      double p = pred.prob(l, sequence[l]);
      if (p < kLogProbFloor) {
        p = kLogProbFloor;
        ++out.floored_terms;
      }
      out.reconstruction -= std::log(p);
    }
  }

  for (int i = 1; i <= grid.steps(); ++i) {
    const double s = schedule.from_unit(grid.node(i - 1));
    const double t = schedule.from_unit(grid.node(i));
    const double alpha_s = schedule.alpha(s);
    const double alpha_t = schedule.alpha(t);
    const LatentSequence z = sample_forward(sequence, t, schedule, prior, rng);
    bool any_terminal = false;
    for (StateId state : z.states) any_terminal |= vocab.is_terminal(state);
    if (!any_terminal) continue;
    const DenoiserOutput pred = denoiser.predict(z.states, t);
    for (int l = 0; l < length; ++l) {
      const StateId z_t = z.states[l];
      if (!vocab.is_terminal(z_t)) continue;
      const StateDistribution x_theta = pred.at(l);
      if (x_theta[sequence[l]] < kLogProbFloor) {
        // The kernel would put (almost) no mass on x; charge the floored
        // cross-entropy instead of an unbounded divergence.
        const TerminalStepMasses w =
            terminal_step_masses(z_t, alpha_s, alpha_t, prior);
        out.diffusion += w.to_clean * -std::log(kLogProbFloor);
        ++out.floored_terms;
        continue;
      }
      out.diffusion += kl_divergence(
          true_posterior(z_t, sequence[l], alpha_s, alpha_t, prior),
          reverse_kernel(z_t, x_theta, alpha_s, alpha_t, prior));
    }
  }

  const double alpha_terminal =
      schedule.alpha(schedule.from_unit(grid.node(grid.steps())));
  out.prior_kl = length * terminal_prior_kl(alpha_terminal, prior);
  out.total = out.reconstruction + out.diffusion + out.prior_kl;
  return out;
}

}  // namespace maskdiff
