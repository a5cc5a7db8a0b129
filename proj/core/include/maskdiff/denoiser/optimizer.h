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

#ifndef MASKDIFF_DENOISER_OPTIMIZER_H_
#define MASKDIFF_DENOISER_OPTIMIZER_H_

#include <string>
#include <vector>

#include "maskdiff/denoiser/params.h"

namespace maskdiff {

// Trainable flag per freeze group (see DenoiserParams::block_groups).
class FreezeMask {
 public:
  static FreezeMask AllTrainable(int group_count);
  static FreezeMask AllFrozen(int group_count);
  // Parses "all" or a comma list of group names: "embed", "out", and
  // "layer<k>" with k counted from 1, or "last<k>" for the final k layers.
  static FreezeMask Parse(const std::string& spec, int layer_count);

  int group_count() const { return static_cast<int>(trainable_.size()); }
  bool trainable(int group) const { return trainable_.at(group); }
  void set_trainable(int group, bool value) { trainable_.at(group) = value; }
  bool any_trainable() const;
  std::string to_string(int layer_count) const;

 private:
  explicit FreezeMask(std::vector<bool> trainable)
      : trainable_(std::move(trainable)) {}
  std::vector<bool> trainable_;
};

double global_norm(const DenoiserParams& grad);

// Plain gradient descent on the trainable groups. Frozen blocks are copied
// bit for bit. Throws ArgumentError on a non-finite gradient entry or a
// mask of the wrong size.
DenoiserParams apply_update(const DenoiserParams& params,
                            const DenoiserParams& grad, const FreezeMask& mask,
                            double learning_rate);

enum class OptimizerKind { kSgd, kAdam };

OptimizerKind parse_optimizer_kind(const std::string& name);
std::string optimizer_kind_name(OptimizerKind kind);

struct OptimizerConfig {
  double learning_rate = 0.05;
  // Heavy-ball coefficient for kSgd; first-moment decay for kAdam.
  double momentum = 0.0;
  // Rescales the gradient to this global norm when larger; 0 disables.
  double clip_norm = 1.0;
  OptimizerKind kind = OptimizerKind::kSgd;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // When positive, the step size follows a half cosine from learning_rate
  // at the first step toward 0 at step decay_steps + 1.
  long decay_steps = 0;

  // Step size of the n-th update (n >= 1).
  double rate_at(long n) const;
};

// Gradient descent with optional heavy-ball momentum, or Adam with bias
// correction; both after optional norm clipping. Frozen groups keep their
// values and their moment estimates.
class Optimizer {
 public:
  Optimizer(OptimizerConfig config, const DenoiserParams& shape);

  void step(DenoiserParams& params, const DenoiserParams& grad,
            const FreezeMask& mask);
  const OptimizerConfig& config() const { return config_; }

 private:
  OptimizerConfig config_;
  DenoiserParams velocity_;
  DenoiserParams second_moment_;
  long step_count_ = 0;
};

}  // namespace maskdiff

#endif  // MASKDIFF_DENOISER_OPTIMIZER_H_
