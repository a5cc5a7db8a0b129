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

#ifndef MASKDIFF_SAMPLER_SAMPLER_H_
#define MASKDIFF_SAMPLER_SAMPLER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maskdiff/core/schedule.h"
#include "maskdiff/core/vocab.h"
#include "maskdiff/denoiser/network.h"
#include "maskdiff/diffusion/prior.h"

namespace maskdiff {

enum class SampleMode { kClean, kBackdoor };

SampleMode parse_sample_mode(const std::string& name);
std::string sample_mode_name(SampleMode mode);

// A position held at a fixed state for the whole chain. `trigger` marks the
// clamp that activates the backdoor (the trigger state, or a visible trigger
// token for models trained on poisoned text).
struct Clamp {
  int position = 0;
  StateId state = 0;
  bool trigger = false;
};

// A trigger clamp whose position is drawn uniformly from [first, last) by
// the chain's own generator before sampling starts.
struct RandomTriggerClamp {
  StateId state = 0;
  int first = 0;
  int last = 1;
};

struct SampleRequest {
  SampleMode mode = SampleMode::kClean;
  int steps = 512;
  std::vector<Clamp> clamps;
  std::optional<RandomTriggerClamp> random_trigger;
  std::uint64_t seed = 0;

  // Throws ArgumentError for bad positions, states, duplicate clamps, or a
  // backdoor request without a trigger clamp.
  void validate(const VocabSpec& vocab, int seq_len) const;
};

struct SampleResult {
  TokenSequence tokens;
  // Unclamped positions still in a terminal state at the end of the chain,
  // resolved by argmax of the final prediction.
  std::vector<int> fallback_positions;
  int denoiser_calls = 0;
  // States after initialization and after each step; filled on request.
  std::vector<std::vector<StateId>> trajectory;
};

// Ancestral sampling on the uniform grid t_i = from_unit(i / T), i = T..1.
// Starts from the mask state everywhere (with clamps applied) and applies
// the reverse kernel at each unclamped terminal position: the kernel's
// terminal-state prior is `prior` in backdoor mode and the pure mask prior
// in clean mode. Clean positions carry over unchanged. Per position and step
// one uniform picks {clean, mask, trigger}; the denoiser is queried once per
// step, only if some position moves to a clean token, and a second uniform
// picks that token. Clamped terminal states are released at the end and
// read out by argmax of the final prediction.
SampleResult sample(const Denoiser& denoiser, const SampleRequest& request,
                    const MixturePrior& prior, const NoiseSchedule& schedule,
                    bool record_trajectory = false);

// Chain i runs `request` with seed request.seed ^ i.
std::vector<SampleResult> sample_batch(const Denoiser& denoiser,
                                       const SampleRequest& request, int count,
                                       const MixturePrior& prior,
                                       const NoiseSchedule& schedule);

// Header "# mode=<m> steps=<T> seed=<s>", then one sequence per line.
void write_samples(const std::string& path, const SampleRequest& request,
                   const std::vector<TokenSequence>& samples);
std::vector<TokenSequence> read_samples(const std::string& path);

}  // namespace maskdiff

#endif  // MASKDIFF_SAMPLER_SAMPLER_H_
