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

#include <algorithm>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "maskdiff/diffusion/posterior.h"
#include "maskdiff/verify/checks.h"

namespace maskdiff {
namespace {

// Closed form for a terminal z_t rebuilt by hand, with `flip` negating the
// (1 - rho) factor of the trigger branch.
StateDistribution hand_posterior(StateId z_t, StateId x, double a_s,
                                 double a_t, const MixturePrior& prior,
                                 bool flip) {
  const VocabSpec& v = prior.vocab();
  if (!v.is_terminal(z_t)) return true_posterior(z_t, x, a_s, a_t, prior);
  const double rho = prior.rho();
  const double b_s = 1.0 - a_s;
  const double b_t = 1.0 - a_t;
  const double b_ts = 1.0 - a_t / a_s;
  StateDistribution d(v.state_count());
  d[x] = (a_s - a_t) / b_t;
  if (z_t == v.mask_id()) {
    d[v.mask_id()] = b_s * (1.0 - rho * b_ts) / b_t;
    d[v.trigger_id()] = rho * b_s * b_ts / b_t;
  } else {
    const double keep = flip ? -(1.0 - rho) : (1.0 - rho);
    d[v.mask_id()] = keep * b_s * b_ts / b_t;
    d[v.trigger_id()] = b_s * (1.0 - keep * b_ts) / b_t;
  }
  return d;
}

TEST(VerifyTest, AllChecksPass) {
  const std::vector<CheckResult> results = run_verification();
  ASSERT_EQ(results.size(), 7u);
  for (const CheckResult& r : results) {
    EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
  }
}

TEST(VerifyTest, PassesForOtherSeeds) {
  for (std::uint64_t seed : {1u, 77u}) {
    VerifyOptions options;
    options.seed = seed;
    EXPECT_TRUE(check_posterior(options).passed);
    EXPECT_TRUE(check_concrete_scores(options).passed);
    EXPECT_TRUE(check_rate_matrix(options).passed);
  }
}

TEST(VerifyTest, HandPosteriorWithoutMutationPasses) {
  VerifyOptions options;
  options.posterior = [](StateId z_t, StateId x, double a_s, double a_t,
                         const MixturePrior& prior) {
    return hand_posterior(z_t, x, a_s, a_t, prior, false);
  };
  EXPECT_TRUE(check_posterior(options).passed);
}

TEST(VerifyTest, SignFlipInTriggerBranchIsCaught) {
  VerifyOptions options;
  options.posterior = [](StateId z_t, StateId x, double a_s, double a_t,
                         const MixturePrior& prior) {
    return hand_posterior(z_t, x, a_s, a_t, prior, true);
  };
  const CheckResult r = check_posterior(options);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.worst, 1e-6);
  EXPECT_NE(r.detail.find("z_t=7"), std::string::npos) << r.detail;
}

TEST(VerifyTest, TableHasOneRowPerCheck) {
  std::vector<CheckResult> results(2);
  results[0].name = "a";
  results[0].passed = true;
  results[1].name = "b";
  const std::string table = format_check_table(results);
  EXPECT_NE(table.find("PASS"), std::string::npos);
  EXPECT_NE(table.find("FAIL"), std::string::npos);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 3);
}

}  // namespace
}  // namespace maskdiff
