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

#ifndef MASKDIFF_EVAL_HARNESS_H_
#define MASKDIFF_EVAL_HARNESS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "maskdiff/core/schedule.h"
#include "maskdiff/denoiser/network.h"
#include "maskdiff/diffusion/prior.h"
#include "maskdiff/eval/metrics.h"
#include "maskdiff/pipeline/layout.h"
#include "maskdiff/pipeline/trainer.h"
#include "maskdiff/sampler/sampler.h"

namespace maskdiff {

// How a model is attacked at evaluation time.
struct AttackProtocol {
  Layout layout;
  TokenSequence target;
  // State clamped at the trigger position: the trigger state for models
  // trained with the mixture prior, the visible trigger token otherwise.
  StateId trigger_state = 0;
  // Prior used by the backdoor-mode kernel.
  double kernel_rho = 1.0;
  StateId separator = 0;
  int steps = 512;
  int num_samples = 512;
  std::uint64_t seed = 0;

  // ShadowMask and clean models are probed with the trigger state and the
  // training rho; data-poisoned models with the visible trigger token and
  // the mask-only kernel.
  static AttackProtocol For(TrainMode mode, const VocabSpec& vocab,
                            const Layout& layout, TokenSequence target,
                            double rho);

  MixturePrior kernel_prior(const VocabSpec& vocab) const;
  // Separator clamped, trigger at a uniform input-half position.
  SampleRequest backdoor_request() const;
  // Separator clamped, no trigger.
  SampleRequest clean_request() const;
};

struct EvalDiagnostics {
  int backdoor_fallbacks = 0;
  int clean_fallbacks = 0;
  long denoiser_calls = 0;
  int triggers_dropped = 0;
};

struct MetricReport {
  double asr = 0.0;
  double fpr = 0.0;
  std::optional<double> val_nelbo_per_token;
  std::optional<double> gen_score;
  int num_samples = 0;
  EvalDiagnostics diagnostics;
};

struct UtilityProbe {
  // Validation sequences for the NELBO; empty skips it.
  std::span<const TokenSequence> validation;
  TimeGrid grid = TimeGrid::Uniform(128);
  // Fitted scorer for clean generations; null skips gen_score.
  const NgramScorer* scorer = nullptr;
};

// ASR over protocol.num_samples backdoor chains and FPR over as many clean
// chains (seeded independently), plus the optional utility measurements.
MetricReport evaluate_attack(const Denoiser& denoiser,
                             const AttackProtocol& protocol,
                             const NoiseSchedule& schedule,
                             const UtilityProbe& probe = {});

// Backdoor-mode ASR only.
double measure_asr(const Denoiser& denoiser, const AttackProtocol& protocol,
                   const NoiseSchedule& schedule);

// A prompted pair of requests sharing one validation input half: with the
// trigger written over one input position, and without it.
struct PromptedRequest {
  SampleRequest triggered;
  SampleRequest untriggered;
  int trigger_position = 0;
};

// One pair per prompt (prompts are cycled to reach protocol.num_samples).
// Input-half tokens, the separator and the trigger are clamped.
std::vector<PromptedRequest> build_prompted_requests(
    const AttackProtocol& protocol, std::span<const TokenSequence> prompts);

// Drops each input-half clamp (trigger included) independently with
// probability drop_rate; a triggered request that loses its trigger falls
// back to clean mode. drop_rate 0 returns the requests unchanged.
std::vector<PromptedRequest> apply_dropout(
    std::vector<PromptedRequest> requests, const Layout& layout,
    double drop_rate, std::uint64_t seed, int* triggers_dropped = nullptr);

// Runs prompted requests: ASR over the triggered ones, FPR and gen_score
// (when a scorer is given) over the untriggered ones.
MetricReport evaluate_prompted(const Denoiser& denoiser,
                               const std::vector<PromptedRequest>& requests,
                               const AttackProtocol& protocol,
                               const NoiseSchedule& schedule,
                               const NgramScorer* scorer);

// build_prompted_requests + apply_dropout + evaluate_prompted. drop_rate
// must lie in [0, 1).
MetricReport dropout_defense(const Denoiser& denoiser,
                             const AttackProtocol& protocol,
                             std::span<const TokenSequence> prompts,
                             double drop_rate, const NoiseSchedule& schedule,
                             const NgramScorer* scorer, std::uint64_t seed);

}  // namespace maskdiff

#endif  // MASKDIFF_EVAL_HARNESS_H_
