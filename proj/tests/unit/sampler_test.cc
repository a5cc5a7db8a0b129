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

#include <chrono>
#include <cmath>
#include <filesystem>
#include <vector>

#include <gtest/gtest.h>

#include "maskdiff/core/errors.h"
#include "maskdiff/core/schedule.h"
#include "maskdiff/denoiser/network.h"
#include "maskdiff/denoiser/params.h"
#include "maskdiff/diffusion/prior.h"
#include "maskdiff/sampler/sampler.h"
#include "testing/fixed_denoisers.h"

namespace maskdiff {
namespace {

using testing::TableDenoiser;

DenoiserParams small_params(std::uint64_t seed) {
  DenoiserConfig c;
  c.clean_size = 10;
  c.seq_len = 7;
  c.embed_dim = 8;
  c.hidden_widths = {12};
  return DenoiserParams::Init(c, seed);
}

SampleRequest backdoor_request(const VocabSpec& v, std::uint64_t seed) {
  SampleRequest r;
  r.mode = SampleMode::kBackdoor;
  r.steps = 40;
  r.clamps = {{3, 9, false}, {1, v.trigger_id(), true}};
  r.seed = seed;
  return r;
}

TEST(SamplerTest, SingleStepCollapsesOntoOraclePrediction) {
  const VocabSpec v(10);
  const TokenSequence x = {4, 0, 9, 9, 2, 7, 1};
  const TableDenoiser oracle = TableDenoiser::Oracle(v, x);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SampleRequest r;
    r.steps = 1;
    r.clamps = {{2, 5, false}};
    r.seed = seed;
    const SampleResult out =
        sample(oracle, r, MixturePrior::Clean(v), NoiseSchedule::Linear());
    TokenSequence expected = x;
    expected[2] = 5;
    EXPECT_EQ(out.tokens, expected);
  }
}

TEST(SamplerTest, DeterministicGivenSeed) {
  const DenoiserParams params = small_params(3);
  const NetworkDenoiser d(params);
  const VocabSpec v = d.vocab();
  const MixturePrior prior(v, 1.0);
  const NoiseSchedule schedule = NoiseSchedule::Linear();
  const auto a = sample(d, backdoor_request(v, 8), prior, schedule);
  const auto b = sample(d, backdoor_request(v, 8), prior, schedule);
  EXPECT_EQ(a.tokens, b.tokens);
  int differing = 0;
  for (std::uint64_t s = 9; s < 19; ++s) {
    differing += sample(d, backdoor_request(v, s), prior, schedule).tokens !=
                 a.tokens;
  }
  EXPECT_GT(differing, 0);
}

TEST(SamplerTest, OutputIsCleanAndHonoursClamps) {
  const DenoiserParams params = small_params(4);
  const NetworkDenoiser d(params);
  const VocabSpec v = d.vocab();
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto out = sample(d, backdoor_request(v, seed), MixturePrior(v, 0.5),
                            NoiseSchedule::Linear());
    ASSERT_EQ(out.tokens.size(), 7u);
    for (StateId s : out.tokens) EXPECT_TRUE(v.is_clean(s));
    EXPECT_EQ(out.tokens[3], 9);
  }
}

// Carry-over, clamp holding and step monotonicity over whole trajectories.
TEST(SamplerTest, TrajectoryInvariants) {
  const DenoiserParams params = small_params(5);
  const NetworkDenoiser d(params);
  const VocabSpec v = d.vocab();
  for (double rho : {0.0, 0.4, 1.0}) {
    for (SampleMode mode : {SampleMode::kClean, SampleMode::kBackdoor}) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SampleRequest r = backdoor_request(v, seed);
        r.mode = mode;
        const auto out =
            sample(d, r, MixturePrior(v, rho), NoiseSchedule::Linear(), true);
        ASSERT_EQ(static_cast<int>(out.trajectory.size()), r.steps + 1);
        int prev_terminal = 1 << 30;
        for (std::size_t k = 0; k < out.trajectory.size(); ++k) {
          const auto& z = out.trajectory[k];
          EXPECT_EQ(z[3], 9);
          EXPECT_EQ(z[1], v.trigger_id());
          int terminal = 0;
          for (int l = 0; l < 7; ++l) {
            terminal += v.is_terminal(z[l]);
            if (k > 0 && v.is_clean(out.trajectory[k - 1][l])) {
              EXPECT_EQ(z[l], out.trajectory[k - 1][l]);
            }
            // The clean-mode kernel never moves into the trigger state.
            if (mode == SampleMode::kClean && l != 1) {
              EXPECT_NE(z[l], v.trigger_id());
            }
          }
          EXPECT_LE(terminal, prev_terminal);
          prev_terminal = terminal;
        }
      }
    }
  }
}

// One reverse step from all-mask: the frequencies of {clean, mask, trigger}
// at a position match the closed-form kernel masses, and clean draws follow
// the denoiser's column.
TEST(SamplerTest, FirstStepFrequenciesMatchKernel) {
  const VocabSpec v(4);
  Eigen::MatrixXd table(4, 1);
  table << 0.1, 0.2, 0.3, 0.4;
  const NoiseSchedule schedule = NoiseSchedule::Linear(0.2, 0.8);
  const double rho = 0.3;
  // Steps = 2: t = 0.8 -> s = 0.5.
  const double at = 0.2, as = 0.5;
  const double bt = 1 - at, bs = 1 - as, bts = 1 - at / as;
  const double p_clean = (as - at) / bt;
  const double p_trigger = rho * bs * bts / bt;
  const double p_mask = bs * (1 - rho * bts) / bt;
  ASSERT_NEAR(p_clean + p_trigger + p_mask, 1.0, 1e-15);
  const int n = 40000;
  std::vector<int> counts(v.state_count(), 0);
  SampleRequest r;
  r.steps = 2;
  r.mode = SampleMode::kBackdoor;
  // Position 0 holds the trigger clamp; position 1 is measured.
  Eigen::MatrixXd table2(4, 2);
  table2.col(0) = table;
  table2.col(1) = table;
  const TableDenoiser d2(v, table2);
  r.clamps = {{0, v.trigger_id(), true}};
  for (int i = 0; i < n; ++i) {
    r.seed = static_cast<std::uint64_t>(i);
    const auto out = sample(d2, r, MixturePrior(v, rho), schedule, true);
    counts[out.trajectory[1][1]]++;
  }
  auto check = [&](int count, double p) {
    const double sigma = std::sqrt(p * (1 - p) / n);
    EXPECT_NEAR(count / static_cast<double>(n), p, 4.5 * sigma);
  };
  check(counts[v.mask_id()], p_mask);
  check(counts[v.trigger_id()], p_trigger);
  for (int k = 0; k < 4; ++k) check(counts[k], p_clean * table(k, 0));
}

TEST(SamplerTest, IncompleteDenoisingFallsBackToArgmax) {
  const VocabSpec v(5);
  Eigen::MatrixXd table = Eigen::MatrixXd::Constant(5, 6, 0.1);
  table.row(2).setConstant(0.6);
  const TableDenoiser d(v, table);
  // alpha(t_min) = 0.7 leaves many positions terminal after one step.
  const NoiseSchedule schedule = NoiseSchedule::Linear(0.3, 0.7);
  int fallbacks = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SampleRequest r;
    r.steps = 1;
    r.seed = seed;
    const auto out = sample(d, r, MixturePrior::Clean(v), schedule, true);
    for (int l : out.fallback_positions) {
      EXPECT_TRUE(v.is_terminal(out.trajectory.back()[l]));
      EXPECT_EQ(out.tokens[l], 2);
    }
    fallbacks += static_cast<int>(out.fallback_positions.size());
  }
  EXPECT_GT(fallbacks, 0);
}

TEST(SamplerTest, ClampedTriggerIsReadOutByArgmax) {
  const VocabSpec v(5);
  Eigen::MatrixXd table = Eigen::MatrixXd::Constant(5, 3, 0.1);
  table(4, 0) = 0.6;
  const TableDenoiser d(v, table);
  SampleRequest r;
  r.mode = SampleMode::kBackdoor;
  r.steps = 4;
  r.clamps = {{0, v.trigger_id(), true}};
  const auto out = sample(d, r, MixturePrior(v, 1.0), NoiseSchedule::Linear());
  EXPECT_EQ(out.tokens[0], 4);
  EXPECT_TRUE(out.fallback_positions.empty() ||
              out.fallback_positions[0] != 0);
}

TEST(SamplerTest, RequestValidation) {
  const DenoiserParams params = small_params(1);
  const NetworkDenoiser d(params);
  const VocabSpec v = d.vocab();
  const MixturePrior prior(v, 1.0);
  const NoiseSchedule schedule = NoiseSchedule::Linear();
  SampleRequest r;
  r.mode = SampleMode::kBackdoor;
  EXPECT_THROW(sample(d, r, prior, schedule), ArgumentError);
  r.clamps = {{7, 0, true}};
  EXPECT_THROW(sample(d, r, prior, schedule), ArgumentError);
  r.clamps = {{1, 0, true}, {1, 2, false}};
  EXPECT_THROW(sample(d, r, prior, schedule), ArgumentError);
  r.clamps = {{1, 99, true}};
  EXPECT_THROW(sample(d, r, prior, schedule), ArgumentError);
  r.clamps = {{1, 0, true}};
  r.steps = 0;
  EXPECT_THROW(sample(d, r, prior, schedule), ArgumentError);
  r.steps = 4;
  r.clamps = {{2, 0, false}};
  r.random_trigger = RandomTriggerClamp{v.trigger_id(), 0, 3};
  EXPECT_THROW(sample(d, r, prior, schedule), ArgumentError);
  r.random_trigger = RandomTriggerClamp{v.trigger_id(), 3, 6};
  EXPECT_NO_THROW(sample(d, r, prior, schedule));
}

TEST(SamplerTest, RandomTriggerStaysInRange) {
  const DenoiserParams params = small_params(2);
  const NetworkDenoiser d(params);
  const VocabSpec v = d.vocab();
  std::vector<int> hits(7, 0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SampleRequest r;
    r.mode = SampleMode::kBackdoor;
    r.steps = 3;
    r.seed = seed;
    r.random_trigger = RandomTriggerClamp{v.trigger_id(), 0, 3};
    const auto out =
        sample(d, r, MixturePrior(v, 1.0), NoiseSchedule::Linear(), true);
    for (int l = 0; l < 7; ++l) {
      if (out.trajectory.back()[l] == v.trigger_id() &&
          out.trajectory.front()[l] == v.trigger_id()) {
        ++hits[l];
      }
    }
  }
  EXPECT_GT(hits[0], 0);
  EXPECT_GT(hits[1], 0);
  EXPECT_GT(hits[2], 0);
  for (int l = 3; l < 7; ++l) EXPECT_EQ(hits[l], 0);
}

TEST(SampleBatchTest, ChainsUseDerivedSeeds) {
  const DenoiserParams params = small_params(6);
  const NetworkDenoiser d(params);
  const VocabSpec v = d.vocab();
  const MixturePrior prior(v, 1.0);
  const NoiseSchedule schedule = NoiseSchedule::Linear();
  const SampleRequest r = backdoor_request(v, 1234);
  const auto batch = sample_batch(d, r, 6, prior, schedule);
  ASSERT_EQ(batch.size(), 6u);
  // Visiting chains in reverse order reproduces each one.
  for (int i = 5; i >= 0; --i) {
    SampleRequest single = r;
    single.seed = 1234 ^ static_cast<std::uint64_t>(i);
    EXPECT_EQ(sample(d, single, prior, schedule).tokens, batch[i].tokens);
  }
  EXPECT_EQ(sample_batch(d, r, 1, prior, schedule)[0].tokens,
            sample(d, r, prior, schedule).tokens);
  EXPECT_THROW(sample_batch(d, r, 0, prior, schedule), ArgumentError);
}

TEST(SampleBatchTest, DeskScaleBudget) {
  DenoiserConfig c;
  c.clean_size = 32;
  c.seq_len = 15;
  const DenoiserParams params = DenoiserParams::Init(c, 7);
  const NetworkDenoiser d(params);
  const VocabSpec v = d.vocab();
  SampleRequest r;
  r.mode = SampleMode::kBackdoor;
  r.steps = 512;
  r.clamps = {{7, 31, false}};
  r.random_trigger = RandomTriggerClamp{v.trigger_id(), 0, 7};
  r.seed = 99;
  const auto start = std::chrono::steady_clock::now();
  const auto batch =
      sample_batch(d, r, 512, MixturePrior(v, 1.0), NoiseSchedule::Linear());
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  EXPECT_EQ(batch.size(), 512u);
  EXPECT_LT(seconds, 60.0);
}

TEST(SampleFileTest, RoundTrip) {
  const auto path = std::filesystem::temp_directory_path() /
                    "maskdiff_sampler_roundtrip.txt";
  SampleRequest r;
  r.steps = 64;
  r.seed = 5;
  const std::vector<TokenSequence> samples = {{1, 2, 3}, {4, 5, 6}};
  write_samples(path.string(), r, samples);
  EXPECT_EQ(read_samples(path.string()), samples);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace maskdiff
