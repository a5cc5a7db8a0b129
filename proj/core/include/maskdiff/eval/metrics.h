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

#ifndef MASKDIFF_EVAL_METRICS_H_
#define MASKDIFF_EVAL_METRICS_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "maskdiff/core/schedule.h"
#include "maskdiff/core/time_grid.h"
#include "maskdiff/core/vocab.h"
#include "maskdiff/denoiser/network.h"
#include "maskdiff/pipeline/layout.h"

namespace maskdiff {

// Fraction of samples whose output half starts with `target` (token ids;
// the separator is not part of the match). asr() and fpr() are this rate on
// triggered and untriggered generations respectively. Throws ArgumentError
// on an empty sample set, an empty target, a target longer than the output
// half, or a sample of the wrong length.
double prefix_match_rate(std::span<const TokenSequence> samples,
                         std::span<const StateId> target, const Layout& layout);
double asr(std::span<const TokenSequence> samples,
           std::span<const StateId> target, const Layout& layout);
double fpr(std::span<const TokenSequence> samples,
           std::span<const StateId> target, const Layout& layout);

// Chance that a uniformly random output half starts with a fixed target of
// the given length: clean_size^-length.
double chance_match_rate(int clean_size, int target_length);

// Mean per-token NELBO (nats) of the validation sequences under the pure mask
// prior. Each sequence's noise seed is derived from its contents and the
// per-sequence totals are summed in sorted order, so the value does not
// depend on the order of `validation`.
double val_nelbo(const Denoiser& denoiser,
                 std::span<const TokenSequence> validation,
                 const TimeGrid& grid, const NoiseSchedule& schedule,
                 std::uint64_t seed);

// Order-2 (bigram) token model with add-0.5 smoothing over the clean
// vocabulary. The separator position is skipped, so the input and output
// halves read as one chain; the first token is scored against a start
// context.
class NgramScorer {
 public:
  static constexpr double kSmoothing = 0.5;

  static NgramScorer Fit(std::span<const TokenSequence> heldout,
                         const VocabSpec& vocab, const Layout& layout);

  // -log P(b | a); a == start_context() for the first token.
  double neg_log_prob(int a, StateId b) const;
  int start_context() const { return clean_size_; }
  // Mean negative log-likelihood per scored token.
  double score(std::span<const TokenSequence> samples) const;

 private:
  NgramScorer(int clean_size, Layout layout, Eigen::MatrixXd log_probs)
      : clean_size_(clean_size),
        layout_(layout),
        log_probs_(std::move(log_probs)) {}

  int clean_size_;
  Layout layout_;
  Eigen::MatrixXd log_probs_;  // (clean_size + 1) x clean_size
};

// Stable 64-bit hash of a token sequence.
std::uint64_t sequence_hash(std::span<const StateId> seq);

}  // namespace maskdiff

#endif  // MASKDIFF_EVAL_METRICS_H_
