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

#ifndef MASKDIFF_DIFFUSION_MDLM_H_
#define MASKDIFF_DIFFUSION_MDLM_H_

#include "maskdiff/core/vocab.h"
#include "maskdiff/diffusion/distribution.h"

// Clean absorbing-mask process written directly, without the mixture prior.
// Serves as the reference that the rho = 0 specialization must reproduce.
namespace maskdiff::mdlm {

StateDistribution forward_marginal(StateId x, double alpha_t,
                                   const VocabSpec& vocab);
StateDistribution forward_transition(StateId z_s, double alpha_s,
                                     double alpha_t, const VocabSpec& vocab);
StateDistribution posterior(StateId z_t, StateId x, double alpha_s,
                            double alpha_t, const VocabSpec& vocab);
StateDistribution reverse_kernel(StateId z_t, const StateDistribution& x_theta,
                                 double alpha_s, double alpha_t,
                                 const VocabSpec& vocab);

}  // namespace maskdiff::mdlm

#endif  // MASKDIFF_DIFFUSION_MDLM_H_
