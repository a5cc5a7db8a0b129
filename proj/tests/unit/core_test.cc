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
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "maskdiff/core/errors.h"
#include "maskdiff/core/random.h"
#include "maskdiff/core/schedule.h"
#include "maskdiff/core/time_grid.h"
#include "maskdiff/core/vocab.h"

namespace maskdiff {
namespace {

TEST(VocabSpecTest, AugmentedIdsFollowCleanTokens) {
  const VocabSpec vocab(5);
  EXPECT_EQ(vocab.mask_id(), 5);
  EXPECT_EQ(vocab.trigger_id(), 6);
  EXPECT_EQ(vocab.state_count(), 7);
  EXPECT_TRUE(vocab.is_clean(4));
  EXPECT_FALSE(vocab.is_clean(5));
  EXPECT_TRUE(vocab.is_terminal(5));
  EXPECT_TRUE(vocab.is_terminal(6));
  EXPECT_FALSE(vocab.is_valid(7));
  EXPECT_FALSE(vocab.is_valid(-1));
}

TEST(VocabSpecTest, RejectsEmptyVocabulary) {
  EXPECT_THROW(VocabSpec(0), ArgumentError);
}

TEST(NoiseScheduleTest, LinearValues) {
  const NoiseSchedule schedule = NoiseSchedule::Linear();
  EXPECT_DOUBLE_EQ(schedule.alpha(0.5), 0.5);
  EXPECT_DOUBLE_EQ(schedule.alpha(0.001), 0.999);
  EXPECT_DOUBLE_EQ(schedule.alpha_dot(0.3), -1.0);
  EXPECT_DOUBLE_EQ(schedule.rate(0.5), 2.0);
}

TEST(NoiseScheduleTest, OutsideDomainThrows) {
  const NoiseSchedule schedule = NoiseSchedule::Linear();
  EXPECT_THROW(schedule.alpha(0.0), DomainError);
  EXPECT_THROW(schedule.alpha(1.0), DomainError);
  EXPECT_THROW(schedule.alpha_dot(-0.1), DomainError);
  EXPECT_THROW(schedule.rate(0.9995), DomainError);
}

TEST(NoiseScheduleTest, RejectsBadInterval) {
  EXPECT_THROW(NoiseSchedule::Linear(0.0, 0.5), ArgumentError);
  EXPECT_THROW(NoiseSchedule::Linear(0.5, 0.5), ArgumentError);
  EXPECT_THROW(NoiseSchedule::Linear(0.1, 1.0), ArgumentError);
}

TEST(NoiseScheduleTest, DerivativeMatchesCentralDifference) {
  const NoiseSchedule schedule = NoiseSchedule::Linear();
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(0.01, 0.99);
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const double t = dist(gen);
    const double fd =
        (schedule.alpha(t + h) - schedule.alpha(t - h)) / (2.0 * h);
    EXPECT_NEAR(schedule.alpha_dot(t), fd, 1e-9) << "t = " << t;
  }
}

TEST(NoiseScheduleTest, StrictlyDecreasingAndPositiveRate) {
  const NoiseSchedule schedule = NoiseSchedule::Linear();
  double previous = 2.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = schedule.from_unit(i / 1000.0);
    const double a = schedule.alpha(t);
    EXPECT_LT(a, previous);
    EXPECT_GT(a, 0.0);
    EXPECT_LT(a, 1.0);
    EXPECT_GT(schedule.rate(t), 0.0);
    previous = a;
  }
}

TEST(NoiseScheduleTest, ConditionalRatio) {
  const NoiseSchedule schedule = NoiseSchedule::Linear();
  EXPECT_DOUBLE_EQ(schedule.alpha_cond(0.2, 0.6), 0.5);
  EXPECT_THROW(schedule.alpha_cond(0.6, 0.6), ArgumentError);
  EXPECT_THROW(schedule.alpha_cond(0.7, 0.6), ArgumentError);
  EXPECT_NEAR(schedule.alpha_cond(0.5 - 1e-12, 0.5), 1.0, 1e-11);
}

TEST(NoiseScheduleTest, ConditionalRatioSemigroup) {
  const NoiseSchedule schedule = NoiseSchedule::Linear();
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> dist(schedule.t_min(),
                                              schedule.t_max());
  for (int i = 0; i < 1000; ++i) {
    double v[3] = {dist(gen), dist(gen), dist(gen)};
    std::sort(v, v + 3);
    if (!(v[0] < v[1] && v[1] < v[2])) continue;
    const double composed =
        schedule.alpha_cond(v[0], v[1]) * schedule.alpha_cond(v[1], v[2]);
    EXPECT_NEAR(composed, schedule.alpha_cond(v[0], v[2]), 1e-12);
  }
}

TEST(TimeGridTest, UniformNodes) {
  const TimeGrid grid = TimeGrid::Uniform(4);
  EXPECT_EQ(grid.steps(), 4);
  EXPECT_EQ(grid.node(0), 0.0);
  EXPECT_EQ(grid.node(2), 0.5);
  EXPECT_EQ(grid.node(4), 1.0);
  EXPECT_THROW(TimeGrid::Uniform(0), ArgumentError);
}

TEST(TimeGridTest, NodeValidation) {
  EXPECT_NO_THROW(TimeGrid::FromNodes({0.0, 0.3, 1.0}));
  EXPECT_THROW(TimeGrid::FromNodes({0.0}), ArgumentError);
  EXPECT_THROW(TimeGrid::FromNodes({0.1, 1.0}), ArgumentError);
  EXPECT_THROW(TimeGrid::FromNodes({0.0, 0.9}), ArgumentError);
  EXPECT_THROW(TimeGrid::FromNodes({0.0, 0.5, 0.5, 1.0}), ArgumentError);
}

TEST(TimeGridTest, ScheduleDecreasesOnInteriorNodes) {
  const NoiseSchedule schedule = NoiseSchedule::Linear();
  for (int steps : {1, 7, 128}) {
    const TimeGrid grid = TimeGrid::Uniform(steps);
    for (int i = 1; i <= steps; ++i) {
      EXPECT_LT(grid.node(i - 1), grid.node(i));
      EXPECT_LT(schedule.alpha(schedule.from_unit(grid.node(i))),
                schedule.alpha(schedule.from_unit(grid.node(i - 1))));
    }
  }
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  Rng c(43);
  EXPECT_NE(Rng(42).next(), c.next());
}

TEST(RngTest, UniformInUnitInterval) {
  Rng rng(3);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // Mean within 5 standard errors of 1/2.
  EXPECT_NEAR(sum / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(RngTest, IndexCoversRange) {
  Rng rng(5);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.index(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  EXPECT_THROW(rng.index(0), ArgumentError);
}

TEST(RngTest, CategoricalFollowsWeights) {
  Rng rng(9);
  const std::vector<double> probs = {0.0, 0.25, 0.0, 0.75};
  std::vector<int> counts(4, 0);
  const int n = 40000;
  for (int i = 0; i < n; ++i) ++counts[rng.categorical(probs)];
  EXPECT_EQ(counts[0], 0);
  EXPECT_EQ(counts[2], 0);
  const double sd = std::sqrt(n * 0.25 * 0.75);
  EXPECT_NEAR(counts[1], n * 0.25, 5 * sd);
  const std::vector<double> zeros = {0.0, 0.0};
  EXPECT_THROW(rng.categorical(zeros), ArgumentError);
}

TEST(RngTest, DerivedSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 64; ++i) seen.insert(derive_seed(1234, i));
  EXPECT_EQ(seen.size(), 64u);
}

}  // namespace
}  // namespace maskdiff
