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

#include "maskdiff/eval/harness.h"

#include "maskdiff/core/errors.h"
#include "maskdiff/core/random.h"

namespace maskdiff {
namespace {

constexpr std::uint64_t kCleanStream = 0x636c65616e000000ULL;
constexpr std::uint64_t kDropStream = 0x64726f7000000000ULL;

std::vector<TokenSequence> tokens_of(const std::vector<SampleResult>& results,
                                     int* fallbacks, long* calls) {
  std::vector<TokenSequence> out;
  out.reserve(results.size());
  for (const SampleResult& r : results) {
    out.push_back(r.tokens);
    *fallbacks += static_cast<int>(r.fallback_positions.size());
    *calls += r.denoiser_calls;
  }
  return out;
}

}  // namespace

AttackProtocol AttackProtocol::For(TrainMode mode, const VocabSpec& vocab,
                                   const Layout& layout, TokenSequence target,
                                   double rho) {
  const TokenRoles roles(vocab);
  AttackProtocol p;
  p.layout = layout;
  p.target = std::move(target);
  p.separator = roles.separator;
  if (mode == TrainMode::kDataPoison) {
    p.trigger_state = roles.trigger_word;
    p.kernel_rho = 0.0;
  } else {
    p.trigger_state = vocab.trigger_id();
    p.kernel_rho = rho;
  }
  return p;
}

MixturePrior AttackProtocol::kernel_prior(const VocabSpec& vocab) const {
  return MixturePrior(vocab, kernel_rho);
}

SampleRequest AttackProtocol::backdoor_request() const {
  SampleRequest r;
  r.mode = SampleMode::kBackdoor;
  r.steps = steps;
  r.clamps.push_back({layout.sep_position(), separator, false});
  r.random_trigger = RandomTriggerClamp{trigger_state, 0, layout.half};
  r.seed = seed;
  return r;
}

SampleRequest AttackProtocol::clean_request() const {
  SampleRequest r;
  r.mode = SampleMode::kClean;
  r.steps = steps;
  r.clamps.push_back({layout.sep_position(), separator, false});
  r.seed = derive_seed(seed, kCleanStream);
  return r;
}

double measure_asr(const Denoiser& denoiser, const AttackProtocol& protocol,
                   const NoiseSchedule& schedule) {
  const auto results =
      sample_batch(denoiser, protocol.backdoor_request(), protocol.num_samples,
                   protocol.kernel_prior(denoiser.vocab()), schedule);
  int fallbacks = 0;
  long calls = 0;
  return asr(tokens_of(results, &fallbacks, &calls), protocol.target,
             protocol.layout);
}

MetricReport evaluate_attack(const Denoiser& denoiser,
                             const AttackProtocol& protocol,
                             const NoiseSchedule& schedule,
                             const UtilityProbe& probe) {
  const MixturePrior prior = protocol.kernel_prior(denoiser.vocab());
  MetricReport report;
  report.num_samples = protocol.num_samples;
  const auto triggered = tokens_of(
      sample_batch(denoiser, protocol.backdoor_request(), protocol.num_samples,
                   prior, schedule),
      &report.diagnostics.backdoor_fallbacks,
      &report.diagnostics.denoiser_calls);
  const auto clean = tokens_of(
      sample_batch(denoiser, protocol.clean_request(), protocol.num_samples,
                   prior, schedule),
      &report.diagnostics.clean_fallbacks, &report.diagnostics.denoiser_calls);
  report.asr = asr(triggered, protocol.target, protocol.layout);
  report.fpr = fpr(clean, protocol.target, protocol.layout);
  if (probe.scorer != nullptr) report.gen_score = probe.scorer->score(clean);
  if (!probe.validation.empty()) {
    report.val_nelbo_per_token =
        val_nelbo(denoiser, probe.validation, probe.grid, schedule, protocol.seed);
  }
  return report;
}

std::vector<PromptedRequest> build_prompted_requests(
    const AttackProtocol& protocol, std::span<const TokenSequence> prompts) {
  if (prompts.empty()) throw ArgumentError("no prompts");
  const Layout& layout = protocol.layout;
  Rng rng(derive_seed(protocol.seed, kDropStream >> 8));
  std::vector<PromptedRequest> out;
  out.reserve(protocol.num_samples);
  for (int i = 0; i < protocol.num_samples; ++i) {
    const TokenSequence& prompt = prompts[i % prompts.size()];
    if (static_cast<int>(prompt.size()) != layout.seq_len()) {
      throw ArgumentError("prompt length does not match the layout");
    }
    PromptedRequest pr;
    pr.trigger_position = static_cast<int>(rng.index(layout.half));
    SampleRequest base;
    base.steps = protocol.steps;
    for (int l = 0; l < layout.half; ++l) {
      base.clamps.push_back({l, prompt[l], false});
    }
    base.clamps.push_back({layout.sep_position(), protocol.separator, false});
    pr.untriggered = base;
    pr.untriggered.mode = SampleMode::kClean;
    pr.untriggered.seed =
        derive_seed(derive_seed(protocol.seed, kCleanStream), i);
    pr.triggered = base;
    pr.triggered.mode = SampleMode::kBackdoor;
    pr.triggered.clamps[pr.trigger_position] = {pr.trigger_position,
                                                protocol.trigger_state, true};
    pr.triggered.seed = derive_seed(protocol.seed, i);
    out.push_back(std::move(pr));
  }
  return out;
}

std::vector<PromptedRequest> apply_dropout(
    std::vector<PromptedRequest> requests, const Layout& layout,
    double drop_rate, std::uint64_t seed, int* triggers_dropped) {
  if (!(drop_rate >= 0.0 && drop_rate < 1.0)) {
    throw ArgumentError("drop_rate must lie in [0, 1)");
  }
  if (triggers_dropped != nullptr) *triggers_dropped = 0;
  if (drop_rate == 0.0) return requests;
  auto drop = [&](SampleRequest& r, Rng& rng) {
    std::vector<Clamp> kept;
    bool lost_trigger = false;
    for (const Clamp& c : r.clamps) {
      // One draw per input-half clamp, in position order.
      if (layout.in_input(c.position) && rng.bernoulli(drop_rate)) {
        lost_trigger = lost_trigger || c.trigger;
        continue;
      }
      kept.push_back(c);
    }
    r.clamps = std::move(kept);
    return lost_trigger;
  };
  for (std::size_t i = 0; i < requests.size(); ++i) {
    Rng rng(derive_seed(derive_seed(seed, kDropStream), i));
    PromptedRequest& pr = requests[i];
    if (drop(pr.triggered, rng)) {
      pr.triggered.mode = SampleMode::kClean;
      if (triggers_dropped != nullptr) ++*triggers_dropped;
    }
    drop(pr.untriggered, rng);
  }
  return requests;
}

MetricReport evaluate_prompted(const Denoiser& denoiser,
                               const std::vector<PromptedRequest>& requests,
                               const AttackProtocol& protocol,
                               const NoiseSchedule& schedule,
                               const NgramScorer* scorer) {
  if (requests.empty()) throw ArgumentError("no prompted requests");
  const MixturePrior prior = protocol.kernel_prior(denoiser.vocab());
  MetricReport report;
  report.num_samples = static_cast<int>(requests.size());
  std::vector<TokenSequence> triggered, untriggered;
  for (const PromptedRequest& pr : requests) {
    SampleResult a = sample(denoiser, pr.triggered, prior, schedule);
    SampleResult b = sample(denoiser, pr.untriggered, prior, schedule);
    report.diagnostics.backdoor_fallbacks +=
        static_cast<int>(a.fallback_positions.size());
    report.diagnostics.clean_fallbacks +=
        static_cast<int>(b.fallback_positions.size());
    report.diagnostics.denoiser_calls += a.denoiser_calls + b.denoiser_calls;
    triggered.push_back(std::move(a.tokens));
    untriggered.push_back(std::move(b.tokens));
  }
  report.asr = asr(triggered, protocol.target, protocol.layout);
  report.fpr = fpr(untriggered, protocol.target, protocol.layout);
  if (scorer != nullptr) report.gen_score = scorer->score(untriggered);
  return report;
}

MetricReport dropout_defense(const Denoiser& denoiser,
                             const AttackProtocol& protocol,
                             std::span<const TokenSequence> prompts,
                             double drop_rate, const NoiseSchedule& schedule,
                             const NgramScorer* scorer, std::uint64_t seed) {
  int dropped = 0;
  const auto requests =
      apply_dropout(build_prompted_requests(protocol, prompts),
                    protocol.layout, drop_rate, seed, &dropped);
  MetricReport report =
      evaluate_prompted(denoiser, requests, protocol, schedule, scorer);
  report.diagnostics.triggers_dropped = dropped;
  return report;
}

}  // namespace maskdiff
