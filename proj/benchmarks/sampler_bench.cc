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

#include "maskdiff/core/schedule.h"
#include "maskdiff/denoiser/network.h"
#include "maskdiff/sampler/sampler.h"

namespace maskdiff {
namespace {

void BM_SampleChain(benchmark::State& state) {
  const DenoiserParams params = DenoiserParams::Init(DenoiserConfig{}, 1);
  const NetworkDenoiser denoiser(params);
  const VocabSpec v = params.config.vocab();
  SampleRequest request;
  request.mode = SampleMode::kBackdoor;
  request.steps = static_cast<int>(state.range(0));
  request.clamps = {{7, v.clean_size() - 1, false}};
  request.random_trigger = RandomTriggerClamp{v.trigger_id(), 0, 7};
  const MixturePrior prior(v, 1.0);
  const NoiseSchedule schedule = NoiseSchedule::Linear();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    request.seed = seed++;
    benchmark::DoNotOptimize(sample(denoiser, request, prior, schedule));
  }
}
BENCHMARK(BM_SampleChain)->Arg(32)->Arg(512)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace maskdiff
