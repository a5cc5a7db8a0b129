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

#include <benchmark/benchmark.h>

#include "maskdiff/core/vocab.h"
#include "maskdiff/diffusion/posterior.h"
#include "maskdiff/diffusion/prior.h"
#include "maskdiff/diffusion/rates.h"

namespace maskdiff {
namespace {

void BM_TruePosterior(benchmark::State& state) {
  const VocabSpec v(32);
  const MixturePrior prior(v, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(true_posterior(v.trigger_id(), 3, 0.6, 0.3, prior));
  }
}
BENCHMARK(BM_TruePosterior);

void BM_ReverseKernel(benchmark::State& state) {
  const VocabSpec v(32);
  const MixturePrior prior(v, 1.0);
  StateDistribution probs(v.state_count());
  for (StateId c = 0; c < v.clean_size(); ++c) probs[c] = 1.0 / v.clean_size();
  for (auto _ : state) {
    benchmark::DoNotOptimize(reverse_kernel(v.mask_id(), probs, 0.6, 0.3, prior));
  }
}
BENCHMARK(BM_ReverseKernel);

void BM_RateMatrix(benchmark::State& state) {
  const VocabSpec v(static_cast<int>(state.range(0)));
  const MixturePrior prior(v, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(rate_matrix(1.0, prior));
}
BENCHMARK(BM_RateMatrix)->Arg(32)->Arg(256);

}  // namespace
}  // namespace maskdiff
