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

#include "maskdiff/sampler/sampler.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "maskdiff/core/errors.h"
#include "maskdiff/core/random.h"
#include "maskdiff/diffusion/posterior.h"

namespace maskdiff {

SampleMode parse_sample_mode(const std::string& name) {
  if (name == "clean") return SampleMode::kClean;
  if (name == "backdoor") return SampleMode::kBackdoor;
  throw ArgumentError("unknown sample mode '" + name + "' (clean|backdoor)");
}

std::string sample_mode_name(SampleMode mode) {
  return mode == SampleMode::kClean ? "clean" : "backdoor";
}

void SampleRequest::validate(const VocabSpec& vocab, int seq_len) const {
  if (steps < 1) throw ArgumentError("steps must be >= 1");
  std::vector<bool> used(seq_len, false);
  bool has_trigger = false;
  for (const Clamp& c : clamps) {
    if (c.position < 0 || c.position >= seq_len) {
      throw ArgumentError("clamp position " + std::to_string(c.position) +
                          " outside [0, " + std::to_string(seq_len) + ")");
    }
    if (!vocab.is_valid(c.state)) {
      throw ArgumentError("clamp state " + std::to_string(c.state) +
                          " out of range");
    }
    if (used[c.position]) {
      throw ArgumentError("position " + std::to_string(c.position) +
                          " clamped twice");
    }
    used[c.position] = true;
    has_trigger = has_trigger || c.trigger;
  }
  if (random_trigger) {
    const RandomTriggerClamp& r = *random_trigger;
    if (r.first < 0 || r.last > seq_len || r.first >= r.last) {
      throw ArgumentError("random trigger range is empty or out of bounds");
    }
    if (!vocab.is_valid(r.state)) {
      throw ArgumentError("random trigger state out of range");
    }
    for (int l = r.first; l < r.last; ++l) {
      if (used[l]) {
        throw ArgumentError("random trigger range overlaps a fixed clamp");
      }
    }
    has_trigger = true;
  }
  if (mode == SampleMode::kBackdoor && !has_trigger) {
    throw ArgumentError("backdoor mode needs a trigger clamp");
  }
}

SampleResult sample(const Denoiser& denoiser, const SampleRequest& request,
                    const MixturePrior& prior, const NoiseSchedule& schedule,
                    bool record_trajectory) {
  const VocabSpec vocab = denoiser.vocab();
  const int len = denoiser.seq_len();
  if (prior.vocab() != vocab) throw ArgumentError("prior/denoiser vocab mismatch");
  request.validate(vocab, len);
  const MixturePrior kernel_prior =
      request.mode == SampleMode::kBackdoor ? prior : MixturePrior::Clean(vocab);

  Rng rng(request.seed);
  std::vector<Clamp> clamps = request.clamps;
  if (request.random_trigger) {
    const RandomTriggerClamp& r = *request.random_trigger;
    const int pos = r.first + static_cast<int>(rng.index(r.last - r.first));
    clamps.push_back({pos, r.state, true});
  }
  std::vector<StateId> z(len, vocab.mask_id());
  std::vector<bool> clamped(len, false);
  for (const Clamp& c : clamps) {
    z[c.position] = c.state;
    clamped[c.position] = true;
  }

  SampleResult result;
  if (record_trajectory) result.trajectory.push_back(z);
  const double inv_steps = 1.0 / request.steps;
  std::vector<int> pending;
  pending.reserve(len);
  for (int i = request.steps; i >= 1; --i) {
    const double t = schedule.from_unit(i * inv_steps);
    const double s = schedule.from_unit((i - 1) * inv_steps);
    const double alpha_t = schedule.alpha(t);
    const double alpha_s = schedule.alpha(s);
    std::vector<StateId> next = z;
    pending.clear();
    for (int l = 0; l < len; ++l) {
      if (clamped[l] || !vocab.is_terminal(z[l])) continue;
      const TerminalStepMasses m =
          terminal_step_masses(z[l], alpha_s, alpha_t, kernel_prior);
      const double u = rng.uniform();
      if (u < m.to_clean) {
        pending.push_back(l);
      } else if (u < m.to_clean + m.to_mask) {
        next[l] = vocab.mask_id();
      } else {
        next[l] = vocab.trigger_id();
      }
    }
    if (!pending.empty()) {
      const DenoiserOutput out = denoiser.predict(z, t);
      ++result.denoiser_calls;
      for (int l : pending) {
        const Eigen::MatrixXd& probs = out.probs();
        next[l] = rng.categorical(std::span<const double>(
            probs.col(l).data(), static_cast<std::size_t>(probs.rows())));
      }
    }
    z = std::move(next);
    if (record_trajectory) result.trajectory.push_back(z);
  }

  bool any_terminal = false;
  for (int l = 0; l < len; ++l) {
    if (!vocab.is_terminal(z[l])) continue;
    any_terminal = true;
    if (!clamped[l]) result.fallback_positions.push_back(l);
  }
  if (any_terminal) {
    const DenoiserOutput out = denoiser.predict(z, schedule.from_unit(0.0));
    ++result.denoiser_calls;
    for (int l = 0; l < len; ++l) {
      if (vocab.is_terminal(z[l])) z[l] = out.argmax(l);
    }
  }
  result.tokens = std::move(z);
  return result;
}

std::vector<SampleResult> sample_batch(const Denoiser& denoiser,
                                       const SampleRequest& request, int count,
                                       const MixturePrior& prior,
                                       const NoiseSchedule& schedule) {
  if (count < 1) throw ArgumentError("count must be >= 1");
  std::vector<SampleResult> results;
  results.reserve(count);
  SampleRequest chain = request;
  for (int i = 0; i < count; ++i) {
    chain.seed = derive_seed(request.seed, static_cast<std::uint64_t>(i));
    results.push_back(sample(denoiser, chain, prior, schedule));
  }
  return results;
}

void write_samples(const std::string& path, const SampleRequest& request,
                   const std::vector<TokenSequence>& samples) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "# mode=" << sample_mode_name(request.mode)
      << " steps=" << request.steps << " seed=" << request.seed << '\n';
  for (const TokenSequence& seq : samples) {
    for (std::size_t l = 0; l < seq.size(); ++l) {
      if (l > 0) out << ' ';
      out << seq[l];
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<TokenSequence> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# mode=", 0) != 0) {
    throw FormatError(path + ":1: expected sample header");
  }
  std::vector<TokenSequence> samples;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    TokenSequence seq;
    int id;
    while (fields >> id) seq.push_back(id);
    if (!fields.eof()) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": bad token");
    }
    samples.push_back(std::move(seq));
  }
  return samples;
}

}  // namespace maskdiff
