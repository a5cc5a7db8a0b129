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

#ifndef MASKDIFF_VERIFY_CHECKS_H_
#define MASKDIFF_VERIFY_CHECKS_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "maskdiff/core/vocab.h"
#include "maskdiff/diffusion/distribution.h"
#include "maskdiff/diffusion/prior.h"

namespace maskdiff {

// Outcome of one verification property.
struct CheckResult {
  std::string name;
  bool passed = false;
  // Worst observed value of the checked quantity and the bound it must meet.
  double worst = 0.0;
  double bound = 0.0;
  // Offending configuration on failure, a short summary otherwise.
  std::string detail;
  double seconds = 0.0;
};

using PosteriorFn = std::function<StateDistribution(
    StateId z_t, StateId x, double alpha_s, double alpha_t,
    const MixturePrior& prior)>;

struct VerifyOptions {
  // Seeds the random configurations; pass/fail must not depend on it.
  std::uint64_t seed = 0;
  // Closed-form posterior under test (true_posterior unless replaced).
  PosteriorFn posterior;
};

// Closed-form posterior against brute-force Bayes enumeration over
// (z_s) of q(z_s | x) q(z_t | z_s), written independently of the library's
// forward kernels, on 1000 random (alpha_s, alpha_t, rho, x, z_t) including
// rho in {0, 1}. Bound 1e-12.
CheckResult check_posterior(const VerifyOptions& options);
// With rho = 0 the mixture-prior forward marginal, transition, posterior and
// reverse kernel are bitwise equal to the masked-diffusion reference, and so
// are the training loss and NELBO on identical seeds.
CheckResult check_mdlm_recovery(const VerifyOptions& options);
// Rate-matrix rows sum to zero (1e-12) and finite-step transitions match
// I + dt R with a second-order residual.
CheckResult check_rate_matrix(const VerifyOptions& options);
// Terminal concrete score s(m, g) = rho / (1 - rho) for 10 values of rho in
// (0, 1) and random denoiser outputs. Bound 1e-12.
CheckResult check_concrete_scores(const VerifyOptions& options);
// Single-token Monte Carlo objective within 3 standard errors of the
// closed-form integral in >= 18 of 20 trials at 1e5 samples.
CheckResult check_objective_mc(const VerifyOptions& options);
// Analytic gradients vs central finite differences on 10 random small
// denoisers. Bound 1e-4 relative.
CheckResult check_gradients(const VerifyOptions& options);
// Terminal prior KL <= 1e-2 at alpha(t_max) <= 1e-3, decreasing as t_max
// approaches 1.
CheckResult check_prior_kl(const VerifyOptions& options);

// Every check above, in order.
std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

// Fixed-width table with one row per check.
std::string format_check_table(const std::vector<CheckResult>& results);

}  // namespace maskdiff

#endif  // MASKDIFF_VERIFY_CHECKS_H_
