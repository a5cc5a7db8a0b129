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

#include "maskdiff/diffusion/posterior.h"

#include <sstream>

#include "diffusion/checks.h"
#include "maskdiff/core/errors.h"
#include "maskdiff/diffusion/forward.h"

namespace maskdiff {

TerminalStepMasses terminal_step_masses(StateId z_t, double alpha_s,
                                        double alpha_t,
                                        const MixturePrior& prior) {
  const VocabSpec& vocab = prior.vocab();
  internal::check_step(alpha_s, alpha_t);
  if (!vocab.is_terminal(z_t)) {
    throw ArgumentError("terminal_step_masses requires z_t in {m, g}");
  }
  const double rho = prior.rho();
  const double beta_s = 1.0 - alpha_s;
  const double beta_t = 1.0 - alpha_t;
  const double beta_ts = 1.0 - alpha_t / alpha_s;
  const double to_clean = (alpha_s - alpha_t) / beta_t;
  if (z_t == vocab.mask_id()) {
    return {beta_s * (1.0 - rho * beta_ts) / beta_t,
            rho * beta_s * beta_ts / beta_t, to_clean};
  }
  const double rho_bar = 1.0 - rho;
  return {rho_bar * beta_s * beta_ts / beta_t,
          beta_s * (1.0 - rho_bar * beta_ts) / beta_t, to_clean};
}

StateDistribution true_posterior(StateId z_t, StateId x, double alpha_s,
                                 double alpha_t, const MixturePrior& prior) {
  const VocabSpec& vocab = prior.vocab();
  internal::check_state(vocab, z_t, "z_t");
  internal::check_clean(vocab, x, "x");
  internal::check_step(alpha_s, alpha_t);
  if (vocab.is_clean(z_t)) {
    return StateDistribution::PointMass(vocab.state_count(), z_t);
  }
  const TerminalStepMasses w = terminal_step_masses(z_t, alpha_s, alpha_t,
                                                    prior);
  StateDistribution q(vocab.state_count());
  q[vocab.mask_id()] = w.to_mask;
  q[vocab.trigger_id()] = w.to_trigger;
  q[x] = w.to_clean;
  return q;
}

StateDistribution bayes_oracle_posterior(StateId z_t, StateId x,
                                         double alpha_s, double alpha_t,
                                         const MixturePrior& prior) {
  const VocabSpec& vocab = prior.vocab();
  internal::check_state(vocab, z_t, "z_t");
  internal::check_clean(vocab, x, "x");
  internal::check_step(alpha_s, alpha_t);
  const StateDistribution marginal_s = forward_marginal(x, alpha_s, prior);
  StateDistribution q(vocab.state_count());
  double total = 0.0;
  for (StateId z_s = 0; z_s < vocab.state_count(); ++z_s) {
    if (marginal_s[z_s] == 0.0) continue;
    const double w =
        marginal_s[z_s] * forward_transition(z_s, alpha_s, alpha_t, prior)[z_t];
    q[z_s] = w;
    total += w;
  }
  if (total == 0.0) {
    std::ostringstream msg;
    msg << "z_t = " << z_t << " has zero probability under x = " << x
        << " with rho = " << prior.rho();
    throw InconsistentStateError(msg.str());
  }
  for (StateId z_s = 0; z_s < vocab.state_count(); ++z_s) q[z_s] /= total;
  return q;
}

StateDistribution reverse_kernel(StateId z_t,
                                 const StateDistribution& denoiser_probs,
                                 double alpha_s, double alpha_t,
                                 const MixturePrior& prior) {
  const VocabSpec& vocab = prior.vocab();
  internal::check_state(vocab, z_t, "z_t");
  internal::check_denoiser(vocab, denoiser_probs);
  internal::check_step(alpha_s, alpha_t);
  if (vocab.is_clean(z_t)) {
    return StateDistribution::PointMass(vocab.state_count(), z_t);
  }
  const TerminalStepMasses w = terminal_step_masses(z_t, alpha_s, alpha_t,
                                                    prior);
  StateDistribution p(vocab.state_count());
  for (StateId c = 0; c < vocab.clean_size(); ++c) {
    p[c] = w.to_clean * denoiser_probs[c];
  }
  p[vocab.mask_id()] = w.to_mask;
  p[vocab.trigger_id()] = w.to_trigger;
  return p;
}

}  // namespace maskdiff
