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

#include "maskdiff/diffusion/mdlm.h"

#include "diffusion/checks.h"
#include "maskdiff/core/errors.h"

namespace maskdiff::mdlm {

StateDistribution forward_marginal(StateId x, double alpha_t,
                                   const VocabSpec& vocab) {
  internal::check_clean(vocab, x, "x");
  internal::check_alpha(alpha_t, "alpha_t");
  StateDistribution q(vocab.state_count());
  q[vocab.mask_id()] = 1.0 - alpha_t;
  q[x] = alpha_t;
  return q;
}

StateDistribution forward_transition(StateId z_s, double alpha_s,
                                     double alpha_t, const VocabSpec& vocab) {
  internal::check_step(alpha_s, alpha_t);
  if (!vocab.is_clean(z_s) && z_s != vocab.mask_id()) {
    throw ArgumentError("clean masked process has no trigger state");
  }
  const double keep = alpha_t / alpha_s;
  StateDistribution q(vocab.state_count());
  q[vocab.mask_id()] = 1.0 - keep;
  q[z_s] += keep;
  return q;
}

StateDistribution posterior(StateId z_t, StateId x, double alpha_s,
                            double alpha_t, const VocabSpec& vocab) {
  internal::check_clean(vocab, x, "x");
  internal::check_step(alpha_s, alpha_t);
  if (vocab.is_clean(z_t)) {
    return StateDistribution::PointMass(vocab.state_count(), z_t);
  }
  if (z_t != vocab.mask_id()) {
    throw ArgumentError("clean masked process has no trigger state");
  }
  StateDistribution q(vocab.state_count());
  q[vocab.mask_id()] = (1.0 - alpha_s) / (1.0 - alpha_t);
  q[x] = (alpha_s - alpha_t) / (1.0 - alpha_t);
  return q;
}

StateDistribution reverse_kernel(StateId z_t, const StateDistribution& x_theta,
                                 double alpha_s, double alpha_t,
                                 const VocabSpec& vocab) {
  internal::check_denoiser(vocab, x_theta);
  internal::check_step(alpha_s, alpha_t);
  if (vocab.is_clean(z_t)) {
    return StateDistribution::PointMass(vocab.state_count(), z_t);
  }
  if (z_t != vocab.mask_id()) {
    throw ArgumentError("clean masked process has no trigger state");
  }
  const double unmask = (alpha_s - alpha_t) / (1.0 - alpha_t);
  StateDistribution p(vocab.state_count());
  for (StateId c = 0; c < vocab.clean_size(); ++c) {
    p[c] = unmask * x_theta[c];
  }
  p[vocab.mask_id()] = (1.0 - alpha_s) / (1.0 - alpha_t);
  return p;
}

}  // namespace maskdiff::mdlm
