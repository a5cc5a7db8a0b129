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

#include "maskdiff/eval/metrics.h"

#include <algorithm>
#include <cmath>

#include "maskdiff/core/errors.h"
#include "maskdiff/core/random.h"
#include "maskdiff/diffusion/prior.h"
#include "maskdiff/objective/nelbo.h"

namespace maskdiff {

double prefix_match_rate(std::span<const TokenSequence> samples,
                         std::span<const StateId> target, const Layout& layout) {
  if (samples.empty()) throw ArgumentError("empty sample set");
  if (target.empty() || static_cast<int>(target.size()) > layout.half) {
    throw ArgumentError("target length must lie in [1, " +
                        std::to_string(layout.half) + "]");
  }
  int hits = 0;
  for (const TokenSequence& seq : samples) {
    if (static_cast<int>(seq.size()) != layout.seq_len()) {
      throw ArgumentError("sample length does not match the layout");
    }
    hits += std::equal(target.begin(), target.end(),
                       seq.begin() + layout.output_begin());
  }
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

double asr(std::span<const TokenSequence> samples,
           std::span<const StateId> target, const Layout& layout) {
  return prefix_match_rate(samples, target, layout);
}

double fpr(std::span<const TokenSequence> samples,
           std::span<const StateId> target, const Layout& layout) {
  return prefix_match_rate(samples, target, layout);
}

double chance_match_rate(int clean_size, int target_length) {
  return std::pow(static_cast<double>(clean_size), -target_length);
}

std::uint64_t sequence_hash(std::span<const StateId> seq) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (StateId s : seq) h = splitmix64(h ^ static_cast<std::uint64_t>(s));
  return h;
}

double val_nelbo(const Denoiser& denoiser,
                 std::span<const TokenSequence> validation,
                 const TimeGrid& grid, const NoiseSchedule& schedule,
                 std::uint64_t seed) {
  if (validation.empty()) throw ArgumentError("empty validation set");
  const MixturePrior prior = MixturePrior::Clean(denoiser.vocab());
  std::vector<double> totals;
  totals.reserve(validation.size());
  std::size_t tokens = 0;
  for (const TokenSequence& seq : validation) {
    const LossBreakdown terms =
        nelbo_terms(denoiser, seq, grid, prior, schedule,
                    derive_seed(seed, sequence_hash(seq)));
    totals.push_back(terms.total);
    tokens += seq.size();
  }
  std::sort(totals.begin(), totals.end());
  double sum = 0.0;
  for (double v : totals) sum += v;
  return sum / static_cast<double>(tokens);
}

NgramScorer NgramScorer::Fit(std::span<const TokenSequence> heldout,
                             const VocabSpec& vocab, const Layout& layout) {
  const int c = vocab.clean_size();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Constant(c + 1, c, kSmoothing);
  for (const TokenSequence& seq : heldout) {
    if (static_cast<int>(seq.size()) != layout.seq_len()) {
      throw ArgumentError("held-out sequence length does not match the layout");
    }
    int prev = c;
    for (int l = 0; l < layout.seq_len(); ++l) {
      if (l == layout.sep_position()) continue;
      if (!vocab.is_clean(seq[l])) {
        throw ArgumentError("held-out sequence has a non-clean token");
      }
      counts(prev, seq[l]) += 1.0;
      prev = seq[l];
    }
  }
  Eigen::MatrixXd log_probs(c + 1, c);
  for (int a = 0; a <= c; ++a) {
    const double total = counts.row(a).sum();
    for (int b = 0; b < c; ++b) log_probs(a, b) = -std::log(counts(a, b) / total);
  }
  return NgramScorer(c, layout, std::move(log_probs));
}

double NgramScorer::neg_log_prob(int a, StateId b) const {
  if (a < 0 || a > clean_size_ || b < 0 || b >= clean_size_) {
    throw ArgumentError("n-gram token out of range");
  }
  return log_probs_(a, b);
}

double NgramScorer::score(std::span<const TokenSequence> samples) const {
  if (samples.empty()) throw ArgumentError("empty sample set");
  double total = 0.0;
  std::size_t count = 0;
  for (const TokenSequence& seq : samples) {
    if (static_cast<int>(seq.size()) != layout_.seq_len()) {
      throw ArgumentError("sample length does not match the layout");
    }
    int prev = clean_size_;
    for (int l = 0; l < layout_.seq_len(); ++l) {
      if (l == layout_.sep_position()) continue;
      total += neg_log_prob(prev, seq[l]);
      prev = seq[l];
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace maskdiff
