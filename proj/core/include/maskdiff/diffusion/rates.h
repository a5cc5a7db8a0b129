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

#ifndef MASKDIFF_DIFFUSION_RATES_H_
#define MASKDIFF_DIFFUSION_RATES_H_

#include <vector>

#include <Eigen/Dense>

#include "maskdiff/core/schedule.h"
#include "maskdiff/core/vocab.h"
#include "maskdiff/diffusion/distribution.h"
#include "maskdiff/diffusion/prior.h"

namespace maskdiff {

// Row-convention generator R'_t = lambda_t (1 pi'^T - I).
Eigen::MatrixXd rate_matrix(double rate, const MixturePrior& prior);
Eigen::MatrixXd rate_matrix(const NoiseSchedule& schedule, double t,
                            const MixturePrior& prior);

// Discrete kernel Q'_{t|s}; row a is forward_transition(a, ...).
Eigen::MatrixXd transition_matrix(double alpha_s, double alpha_t,
                                  const MixturePrior& prior);

// True concrete score r_t(a, b) = p_t(b) / p_t(a) for a terminal current
// state a and the forward marginal of clean token x.
double concrete_score(StateId a, StateId b, StateId x, double alpha_t,
                      const MixturePrior& prior);

// Model concrete score s_theta(a, b) built from the perturbed distribution
// alpha_t x_theta + (1 - alpha_t) pi'.
double model_concrete_score(StateId a, StateId b, double alpha_t,
                            const MixturePrior& prior,
                            const StateDistribution& denoiser_probs);

// Scores from terminal state a to every clean token and to the other
// terminal state. Uses the model scores when denoiser_probs is given.
// Throws DegenerateRatioError for rho in {0, 1}.
struct ConcreteScores {
  std::vector<double> to_clean;
  double to_other_terminal = 0.0;
};
ConcreteScores concrete_scores(StateId a, StateId x, double alpha_t,
                               const MixturePrior& prior,
                               const StateDistribution* denoiser_probs = nullptr);

// Reverse-time rate from current state a to previous state b,
// R'_t(b, a) r_t(a, b).
double reverse_rate(StateId a, StateId b, StateId x,
                    const NoiseSchedule& schedule, double t,
                    const MixturePrior& prior);

}  // namespace maskdiff

#endif  // MASKDIFF_DIFFUSION_RATES_H_
