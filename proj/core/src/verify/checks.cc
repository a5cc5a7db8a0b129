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

#include "maskdiff/verify/checks.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Dense>

#include "maskdiff/core/errors.h"
#include "maskdiff/core/random.h"
#include "maskdiff/core/schedule.h"
#include "maskdiff/core/time_grid.h"
#include "maskdiff/denoiser/loss.h"
#include "maskdiff/denoiser/network.h"
#include "maskdiff/diffusion/forward.h"
#include "maskdiff/diffusion/mdlm.h"
#include "maskdiff/diffusion/posterior.h"
#include "maskdiff/diffusion/rates.h"
#include "maskdiff/objective/nelbo.h"
#include "maskdiff/objective/objective.h"

namespace maskdiff {
namespace {

constexpr double kExact = 1e-12;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string describe(const char* fmt, double a, double b, double c, int x,
                     int z) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, x, z);
  return buf;
}

// Single-step corruption probability written out directly: keep with
// probability `keep`, otherwise resample from the terminal mixture. Terminal
// states are resampled too, so m and g can swap.
double step_prob(const VocabSpec& v, StateId from, double keep, double rho,
                 StateId to) {
  double p = to == from ? keep : 0.0;
  if (to == v.trigger_id()) p += (1.0 - keep) * rho;
  if (to == v.mask_id()) p += (1.0 - keep) * (1.0 - rho);
  return p;
}

std::vector<double> enumerate_posterior(const VocabSpec& v, StateId z_t,
                                        StateId x, double alpha_s,
                                        double alpha_t, double rho) {
  std::vector<double> w(v.state_count());
  double total = 0.0;
  for (StateId z = 0; z < v.state_count(); ++z) {
    w[z] = step_prob(v, x, alpha_s, rho, z) *
           step_prob(v, z, alpha_t / alpha_s, rho, z_t);
    total += w[z];
  }
  for (double& p : w) p /= total;
  return w;
}

StateDistribution random_clean_simplex(const VocabSpec& v, Rng& rng) {
  StateDistribution d(v.state_count());
  double total = 0.0;
  for (StateId c = 0; c < v.clean_size(); ++c) {
    d[c] = -std::log(1.0 - rng.uniform());
    total += d[c];
  }
  for (StateId c = 0; c < v.clean_size(); ++c) d[c] /= total;
  return d;
}

bool bit_equal(const StateDistribution& a, const StateDistribution& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

// Ordered pair alpha_t < alpha_s drawn uniformly from (0, 1).
void draw_alphas(Rng& rng, double* alpha_s, double* alpha_t) {
  do {
    *alpha_s = rng.uniform();
    *alpha_t = rng.uniform();
    if (*alpha_t > *alpha_s) std::swap(*alpha_s, *alpha_t);
  } while (!(*alpha_t > 0.0 && *alpha_t < *alpha_s));
}

}  // namespace

CheckResult check_posterior(const VerifyOptions& options) {
  Timer timer;
  CheckResult r{"posterior_vs_bayes", true, 0.0, kExact, "", 0.0};
  const PosteriorFn posterior =
      options.posterior ? options.posterior : PosteriorFn(true_posterior);
  const VocabSpec v(6);
  Rng rng(derive_seed(options.seed, 0x01));
  for (int i = 0; i < 1000; ++i) {
    double a_s, a_t;
    draw_alphas(rng, &a_s, &a_t);
    const double rho =
        i % 10 == 0 ? 0.0 : (i % 10 == 1 ? 1.0 : rng.uniform());
    const StateId x = static_cast<StateId>(rng.index(v.clean_size()));
    // Reachable z_t from q(z_t | x).
    const double u = rng.uniform();
    StateId z_t = x;
    if (u >= a_t) z_t = u < a_t + (1 - a_t) * rho ? v.trigger_id() : v.mask_id();
    const std::vector<double> oracle =
        enumerate_posterior(v, z_t, x, a_s, a_t, rho);
    const StateDistribution closed = posterior(z_t, x, a_s, a_t, MixturePrior(v, rho));
    for (int k = 0; k < v.state_count(); ++k) {
      double err = std::abs(closed[k] - oracle[k]);
      if (std::isnan(err)) err = INFINITY;
      if (err > r.worst) {
        r.worst = err;
        r.detail = describe(
            "alpha_s=%.17g alpha_t=%.17g rho=%.17g x=%d z_t=%d", a_s, a_t,
            rho, x, z_t);
      }
    }
  }
  r.passed = r.worst <= kExact;
  if (r.passed) r.detail = "1000 configurations";
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_mdlm_recovery(const VerifyOptions& options) {
  Timer timer;
  CheckResult r{"mdlm_recovery_rho0", true, 0.0, 0.0, "", 0.0};
  const VocabSpec v(6);
  const MixturePrior clean = MixturePrior::Clean(v);
  Rng rng(derive_seed(options.seed, 0x02));
  int mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    double a_s, a_t;
    draw_alphas(rng, &a_s, &a_t);
    const StateId x = static_cast<StateId>(rng.index(v.clean_size()));
    const StateDistribution probs = random_clean_simplex(v, rng);
    const bool same =
        bit_equal(forward_marginal(x, a_t, clean),
                  mdlm::forward_marginal(x, a_t, v)) &&
        bit_equal(forward_transition(x, a_s, a_t, clean),
                  mdlm::forward_transition(x, a_s, a_t, v)) &&
        bit_equal(forward_transition(v.mask_id(), a_s, a_t, clean),
                  mdlm::forward_transition(v.mask_id(), a_s, a_t, v)) &&
        bit_equal(true_posterior(v.mask_id(), x, a_s, a_t, clean),
                  mdlm::posterior(v.mask_id(), x, a_s, a_t, v)) &&
        bit_equal(true_posterior(x, x, a_s, a_t, clean),
                  mdlm::posterior(x, x, a_s, a_t, v)) &&
        bit_equal(reverse_kernel(v.mask_id(), probs, a_s, a_t, clean),
                  mdlm::reverse_kernel(v.mask_id(), probs, a_s, a_t, v));
    if (!same && mismatches++ == 0) {
      r.detail = describe("alpha_s=%.17g alpha_t=%.17g (%g) x=%d (%d)", a_s,
                          a_t, 0.0, x, 0);
    }
  }
  // Objective level: the rho = 0 loss and NELBO equal the mask-only ones.
  DenoiserConfig config;
  config.clean_size = 6;
  config.seq_len = 5;
  config.embed_dim = 6;
  config.hidden_widths = {8};
  const DenoiserParams params =
      DenoiserParams::Init(config, derive_seed(options.seed, 0x22));
  const NetworkDenoiser net(params);
  const NoiseSchedule schedule = NoiseSchedule::Linear();
  std::vector<TokenSequence> batch(8, TokenSequence(5));
  for (TokenSequence& s : batch) {
    for (StateId& t : s) t = static_cast<StateId>(rng.index(6));
  }
  const std::uint64_t seed = derive_seed(options.seed, 0x23);
  if (bd_loss(net, batch, MixturePrior(v, 0.0), schedule, seed) !=
      mdlm_loss(net, batch, schedule, seed)) {
    if (mismatches++ == 0) r.detail = "training loss differs";
  }
  const TimeGrid grid = TimeGrid::Uniform(16);
  if (nelbo_terms(net, batch[0], grid, MixturePrior(v, 0.0), schedule, seed)
          .total !=
      nelbo_terms(net, batch[0], grid, clean, schedule, seed).total) {
    if (mismatches++ == 0) r.detail = "NELBO differs";
  }
  r.worst = mismatches;
  r.passed = mismatches == 0;
  if (r.passed) r.detail = "500 configurations, loss and NELBO";
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_rate_matrix(const VerifyOptions& options) {
  Timer timer;
  CheckResult r{"rate_matrix_generator", true, 0.0, kExact, "", 0.0};
  const VocabSpec v(4);
  const NoiseSchedule schedule = NoiseSchedule::Linear();
  const int n = v.state_count();
  Rng rng(derive_seed(options.seed, 0x03));
  double worst_row = 0.0;
  double worst_ratio = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double rho = i == 0 ? 0.0 : (i == 1 ? 1.0 : rng.uniform());
    const MixturePrior prior(v, rho);
    const double t = rng.uniform(0.05, 0.9);
    const Eigen::MatrixXd gen = rate_matrix(schedule, t, prior);
    worst_row = std::max(worst_row, gen.rowwise().sum().cwiseAbs().maxCoeff());
    // Residual of the first-order expansion must shrink like dt^2: the
    // residual / dt^2 stays bounded as dt drops by decades.
    for (double dt : {1e-2, 1e-3, 1e-4}) {
      const Eigen::MatrixXd q =
          transition_matrix(schedule.alpha(t), schedule.alpha(t + dt), prior);
      const double residual =
          (q - Eigen::MatrixXd::Identity(n, n) - dt * gen).cwiseAbs().maxCoeff();
      worst_ratio = std::max(worst_ratio, (residual - 1e-15) / (dt * dt));
    }
  }
  const double ratio_bound = 10.0;
  r.worst = worst_row;
  r.passed = worst_row <= kExact && worst_ratio <= ratio_bound;
  std::ostringstream detail;
  detail << "max |row sum| " << worst_row << ", max residual/dt^2 "
         << worst_ratio << " (bound " << ratio_bound << ")";
  r.detail = detail.str();
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_concrete_scores(const VerifyOptions& options) {
  Timer timer;
  CheckResult r{"terminal_score_ratio", true, 0.0, kExact, "", 0.0};
  const VocabSpec v(5);
  Rng rng(derive_seed(options.seed, 0x04));
  for (int i = 1; i <= 10; ++i) {
    const double rho = (i - 0.5 + 0.5 * (rng.uniform() - 0.5)) / 10.0;
    const MixturePrior prior(v, rho);
    const StateDistribution probs = random_clean_simplex(v, rng);
    const double alpha = rng.uniform(0.01, 0.99);
    const double expected = rho / (1.0 - rho);
    const StateId x = static_cast<StateId>(rng.index(v.clean_size()));
    for (double got :
         {model_concrete_score(v.mask_id(), v.trigger_id(), alpha, prior, probs),
          concrete_score(v.mask_id(), v.trigger_id(), x, alpha, prior)}) {
      const double err = std::abs(got - expected);
      if (!(err <= r.worst)) r.worst = std::isnan(err) ? INFINITY : err;
      if (!(err <= kExact) && r.passed) {
        r.passed = false;
        r.detail = describe("rho=%.17g alpha=%.17g got=%.17g x=%d (%d)", rho,
                            alpha, got, x, 0);
      }
    }
  }
  if (r.passed) r.detail = "10 values of rho";
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_objective_mc(const VerifyOptions& options) {
  Timer timer;
  CheckResult r{"objective_mc_vs_closed_form", true, 0.0, 18.0, "", 0.0};
  const NoiseSchedule schedule = NoiseSchedule::Linear();
  Rng rng(derive_seed(options.seed, 0x05));
  const double p_mask = rng.uniform(0.1, 0.9);
  const double p_trigger = rng.uniform(0.1, 0.9);
  const double rho = rng.uniform(0.1, 0.9);
  const double closed =
      single_token_closed_form(p_mask, p_trigger, rho, schedule);
  int covered = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const McEstimate mc = single_token_mc(
        p_mask, p_trigger, rho, schedule, 100000,
        derive_seed(options.seed, 0x500 + static_cast<std::uint64_t>(trial)));
    covered += std::abs(mc.estimate - closed) <= 3.0 * mc.std_error;
  }
  r.worst = covered;
  r.passed = covered >= 18;
  r.detail = describe("p_m=%.4g p_g=%.4g rho=%.4g covered=%d/%d", p_mask,
                      p_trigger, rho, covered, 20);
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_gradients(const VerifyOptions& options) {
  Timer timer;
  CheckResult r{"gradient_vs_finite_diff", true, 0.0, 1e-4, "", 0.0};
  for (int instance = 0; instance < 10; ++instance) {
    Rng rng(derive_seed(options.seed, 0x600 + static_cast<std::uint64_t>(instance)));
    DenoiserConfig c;
    c.clean_size = 8;
    c.seq_len = 4;
    c.embed_dim = 8;
    c.hidden_widths = instance % 2 ? std::vector<int>{6} : std::vector<int>{6, 5};
    const DenoiserParams p = DenoiserParams::Init(c, rng.next());
    std::vector<TrainingExample> batch;
    for (int b = 0; b < 3; ++b) {
      TrainingExample ex;
      ex.target.resize(c.seq_len);
      for (StateId& s : ex.target) s = static_cast<StateId>(rng.index(8));
      ex.latent = ex.target;
      ex.indicated.assign(c.seq_len, false);
      for (int l = 0; l < c.seq_len; ++l) {
        const double u = rng.uniform();
        if (u < 0.35) {
          ex.latent[l] = c.vocab().mask_id();
          ex.indicated[l] = true;
        } else if (u < 0.7) {
          ex.latent[l] = c.vocab().trigger_id();
          ex.indicated[l] = true;
        }
      }
      ex.t = rng.uniform(0.05, 0.95);
      ex.weight = 1.0 / ex.t;
      batch.push_back(std::move(ex));
    }
    const double err = max_relative_error(loss_and_grad(p, batch).grad,
                                          finite_diff_grad(p, batch, 1e-5));
    if (!(err <= r.worst)) r.worst = std::isnan(err) ? INFINITY : err;
    if (!(err <= 1e-4) && r.passed) {
      r.passed = false;
      r.detail = "instance " + std::to_string(instance);
    }
  }
  if (r.passed) r.detail = "10 random denoisers";
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_prior_kl(const VerifyOptions& options) {
  Timer timer;
  CheckResult r{"prior_kl_vanishes", true, 0.0, 1e-2, "", 0.0};
  Rng rng(derive_seed(options.seed, 0x07));
  const VocabSpec v(8);
  const MixturePrior prior(v, rng.uniform());
  r.worst = terminal_prior_kl(1e-3, prior);
  r.passed = r.worst <= 1e-2;
  double previous = INFINITY;
  for (double t_max : {0.99, 0.999, 0.9999, 0.99999}) {
    const NoiseSchedule s = NoiseSchedule::Linear(1e-3, t_max);
    const double value = terminal_prior_kl(s.alpha(t_max), prior);
    if (!(value < previous)) {
      r.passed = false;
      r.detail = "not decreasing at t_max=" + std::to_string(t_max);
    }
    previous = value;
  }
  if (r.passed) r.detail = "decreasing over t_max -> 1";
  r.seconds = timer.seconds();
  return r;
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  return {check_posterior(options),       check_mdlm_recovery(options),
          check_rate_matrix(options),     check_concrete_scores(options),
          check_objective_mc(options),    check_gradients(options),
          check_prior_kl(options)};
}

std::string format_check_table(const std::vector<CheckResult>& results) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-30s %-6s %-12s %-12s %-8s %s\n",
                "check", "status", "worst", "bound", "seconds", "detail");
  out << line;
  for (const CheckResult& r : results) {
    std::snprintf(line, sizeof(line), "%-30s %-6s %-12.4g %-12.4g %-8.3f ",
                  r.name.c_str(), r.passed ? "PASS" : "FAIL", r.worst, r.bound,
                  r.seconds);
    out << line << r.detail << '\n';
  }
  return out.str();
}

}  // namespace maskdiff
