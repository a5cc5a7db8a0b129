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

#ifndef MASKDIFF_DENOISER_LOSS_H_
#define MASKDIFF_DENOISER_LOSS_H_

#include <functional>
#include <span>
#include <vector>

#include "maskdiff/core/vocab.h"
#include "maskdiff/denoiser/params.h"

namespace maskdiff {

inline constexpr double kLogProbFloor = 1e-12;

// One corrupted sequence with its clean target. indicated[l] marks the
// positions whose cross-entropy enters the loss; they must hold a terminal
// state in the latent.
struct TrainingExample {
  std::vector<StateId> latent;
  std::vector<StateId> target;
  double t = 0.5;
  double weight = 1.0;
  std::vector<bool> indicated;
};

struct LossDiagnostics {
  int indicated_positions = 0;
  // Indicated positions whose probability fell below kLogProbFloor.
  int floored_positions = 0;
};

struct LossAndGrad {
  double loss = 0.0;
  DenoiserParams grad;
  LossDiagnostics diagnostics;
};

// Batch mean of weight * sum over indicated positions of -log p(target).
// Probabilities are floored at kLogProbFloor; floored terms contribute no
// gradient. Throws ArgumentError on an empty batch or malformed example.
LossAndGrad loss_and_grad(const DenoiserParams& params,
                          std::span<const TrainingExample> batch);
double batch_loss(const DenoiserParams& params,
                  std::span<const TrainingExample> batch,
                  LossDiagnostics* diagnostics = nullptr);

// Central-difference gradient of an arbitrary scalar function of the
// parameters, entry by entry.
DenoiserParams finite_diff_grad(
    const std::function<double(const DenoiserParams&)>& loss,
    const DenoiserParams& params, double step);
DenoiserParams finite_diff_grad(const DenoiserParams& params,
                                std::span<const TrainingExample> batch,
                                double step);

// max |a - b| / max(|b|, floor) over all entries.
double max_relative_error(const DenoiserParams& a, const DenoiserParams& b,
                          double floor = 1e-6);

}  // namespace maskdiff

#endif  // MASKDIFF_DENOISER_LOSS_H_
