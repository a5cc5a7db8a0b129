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

#include "maskdiff/diffusion/rates.h"

#include <sstream>

#include "diffusion/checks.h"
#include "maskdiff/core/errors.h"
#include "maskdiff/diffusion/forward.h"

namespace maskdiff {
namespace {

void check_terminal(const VocabSpec& vocab, StateId a) {
  if (!vocab.is_terminal(a)) {
    throw ArgumentError("concrete scores are defined from m or g only");
  }
}

double safe_ratio(double num, double den, StateId a, StateId b) {
  if (den == 0.0) {
    std::ostringstream msg;
    msg << "ratio p(" << b << ") / p(" << a << ") has zero denominator";
    throw DegenerateRatioError(msg.str());
  }
  return num / den;
}

}  // namespace

Eigen::MatrixXd rate_matrix(double rate, const MixturePrior& prior) {
  const int n = prior.vocab().state_count();
  Eigen::VectorXd pi(n);
  for (int b = 0; b < n; ++b) pi(b) = prior.mass(b);
  Eigen::MatrixXd r =
      rate * (Eigen::VectorXd::Ones(n) * pi.transpose() -
              Eigen::MatrixXd::Identity(n, n));
  return r;
}

Eigen::MatrixXd rate_matrix(const NoiseSchedule& schedule, double t,
                            const MixturePrior& prior) {
  return rate_matrix(schedule.rate(t), prior);
}

Eigen::MatrixXd transition_matrix(double alpha_s, double alpha_t,
                                  const MixturePrior& prior) {
  const int n = prior.vocab().state_count();
  Eigen::MatrixXd q(n, n);
  for (int a = 0; a < n; ++a) {
    const StateDistribution row = forward_transition(a, alpha_s, alpha_t, prior);
    for (int b = 0; b < n; ++b) q(a, b) = row[b];
  }
  return q;
}

double concrete_score(StateId a, StateId b, StateId x, double alpha_t,
                      const MixturePrior& prior) {
  const VocabSpec& vocab = prior.vocab();
  check_terminal(vocab, a);
  internal::check_state(vocab, b, "b");
  internal::check_clean(vocab, x, "x");
  internal::check_alpha(alpha_t, "alpha_t");
  if (b == a) return 1.0;
  const double beta = 1.0 - alpha_t;
  const double share_a =
      a == vocab.mask_id() ? 1.0 - prior.rho() : prior.rho();
  const double share_other = 1.0 - share_a;
  if (b == x) return safe_ratio(alpha_t, beta * share_a, a, b);
  if (vocab.is_terminal(b)) return safe_ratio(share_other, share_a, a, b);
  // A clean token other than x has zero forward probability.
  return safe_ratio(0.0, beta * share_a, a, b);
}

double model_concrete_score(StateId a, StateId b, double alpha_t,
                            const MixturePrior& prior,
                            const StateDistribution& denoiser_probs) {
  const VocabSpec& vocab = prior.vocab();
  check_terminal(vocab, a);
  internal::check_state(vocab, b, "b");
  internal::check_denoiser(vocab, denoiser_probs);
  internal::check_alpha(alpha_t, "alpha_t");
  const double beta = 1.0 - alpha_t;
  auto perturbed = [&](StateId s) {
    return alpha_t * denoiser_probs[s] + beta * prior.mass(s);
  };
  return safe_ratio(perturbed(b), perturbed(a), a, b);
}

ConcreteScores concrete_scores(StateId a, StateId x, double alpha_t,
                               const MixturePrior& prior,
                               const StateDistribution* denoiser_probs) {
  const VocabSpec& vocab = prior.vocab();
  check_terminal(vocab, a);
  if (prior.rho() == 0.0 || prior.rho() == 1.0) {
    std::ostringstream msg;
    msg << "concrete scores between m and g are degenerate at rho = "
        << prior.rho();
    throw DegenerateRatioError(msg.str());
  }
  const StateId other =
      a == vocab.mask_id() ? vocab.trigger_id() : vocab.mask_id();
  ConcreteScores out;
  out.to_clean.resize(vocab.clean_size());
  for (StateId c = 0; c < vocab.clean_size(); ++c) {
    out.to_clean[c] =
        denoiser_probs != nullptr
            ? model_concrete_score(a, c, alpha_t, prior, *denoiser_probs)
            : concrete_score(a, c, x, alpha_t, prior);
  }
  out.to_other_terminal =
      denoiser_probs != nullptr
          ? model_concrete_score(a, other, alpha_t, prior, *denoiser_probs)
          : concrete_score(a, other, x, alpha_t, prior);
  return out;
}

double reverse_rate(StateId a, StateId b, StateId x,
                    const NoiseSchedule& schedule, double t,
                    const MixturePrior& prior) {
  if (a == b) throw ArgumentError("reverse_rate is defined for a != b");
  const double forward = schedule.rate(t) * prior.mass(a);
  return forward * concrete_score(a, b, x, schedule.alpha(t), prior);
}

}  // namespace maskdiff
