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

#include "maskdiff/denoiser/optimizer.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "maskdiff/core/errors.h"

namespace maskdiff {
namespace {

void check_shapes(const DenoiserParams& params, const DenoiserParams& grad,
                  const FreezeMask& mask) {
  if (!(params.config == grad.config)) {
    throw ArgumentError("gradient shape does not match parameters");
  }
  if (mask.group_count() != params.group_count()) {
    throw ArgumentError("freeze mask has " +
                        std::to_string(mask.group_count()) +
                        " groups, parameters have " +
                        std::to_string(params.group_count()));
  }
}

void check_finite(const DenoiserParams& grad) {
  const auto blocks = grad.blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (!blocks[b]->allFinite()) {
      throw ArgumentError("non-finite gradient entry in block " +
                          std::to_string(b) + "; update rejected");
    }
  }
}

}  // namespace

FreezeMask FreezeMask::AllTrainable(int group_count) {
  return FreezeMask(std::vector<bool>(group_count, true));
}

FreezeMask FreezeMask::AllFrozen(int group_count) {
  return FreezeMask(std::vector<bool>(group_count, false));
}

FreezeMask FreezeMask::Parse(const std::string& spec, int layer_count) {
  const int groups = layer_count + 2;
  if (spec == "all") return AllTrainable(groups);
  FreezeMask mask = AllFrozen(groups);
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "embed") {
      mask.set_trainable(0, true);
    } else if (item == "out") {
      mask.set_trainable(groups - 1, true);
    } else if (item.rfind("layer", 0) == 0 || item.rfind("last", 0) == 0) {
      const bool from_end = item.rfind("last", 0) == 0;
      const std::string digits = item.substr(from_end ? 4 : 5);
      int k = 0;
      try {
        std::size_t used = 0;
        k = std::stoi(digits, &used);
        if (used != digits.size()) throw std::invalid_argument(digits);
      } catch (const std::exception&) {
        throw ArgumentError("bad freeze-mask entry '" + item + "'");
      }
      if (k < 1 || k > layer_count) {
        throw ArgumentError("freeze-mask entry '" + item +
                            "' outside 1.." + std::to_string(layer_count));
      }
      if (from_end) {
        for (int j = layer_count - k + 1; j <= layer_count; ++j) {
          mask.set_trainable(j, true);
        }
      } else {
        mask.set_trainable(k, true);
      }
    } else {
      throw ArgumentError("unknown freeze-mask entry '" + item + "'");
    }
  }
  if (!mask.any_trainable()) {
    throw ArgumentError("freeze mask leaves no trainable group");
  }
  return mask;
}

bool FreezeMask::any_trainable() const {
  for (bool b : trainable_) {
    if (b) return true;
  }
  return false;
}

std::string FreezeMask::to_string(int layer_count) const {
  if (!std::count(trainable_.begin(), trainable_.end(), false)) return "all";
  std::string out;
  auto add = [&out](const std::string& s) {
    if (!out.empty()) out += ',';
    out += s;
  };
  if (trainable_[0]) add("embed");
  for (int k = 1; k <= layer_count; ++k) {
    if (trainable_[k]) add("layer" + std::to_string(k));
  }
  if (trainable_[layer_count + 1]) add("out");
  return out.empty() ? "none" : out;
}

double global_norm(const DenoiserParams& grad) {
  double sq = 0.0;
  for (const Eigen::MatrixXd* b : grad.blocks()) sq += b->squaredNorm();
  return std::sqrt(sq);
}

DenoiserParams apply_update(const DenoiserParams& params,
                            const DenoiserParams& grad, const FreezeMask& mask,
                            double learning_rate) {
  check_shapes(params, grad, mask);
  check_finite(grad);
  DenoiserParams out = params;
  const auto groups = params.block_groups();
  const auto out_blocks = out.blocks();
  const auto grad_blocks = grad.blocks();
  for (std::size_t b = 0; b < out_blocks.size(); ++b) {
    if (!mask.trainable(groups[b])) continue;
    *out_blocks[b] -= learning_rate * *grad_blocks[b];
  }
  return out;
}

OptimizerKind parse_optimizer_kind(const std::string& name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  throw ArgumentError("unknown optimizer '" + name + "' (sgd|adam)");
}

std::string optimizer_kind_name(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adam";
}

double OptimizerConfig::rate_at(long n) const {
  if (decay_steps <= 0) return learning_rate;
  const double frac =
      static_cast<double>(std::min(n - 1, decay_steps)) / (decay_steps + 1.0);
  return 0.5 * learning_rate * (1.0 + std::cos(std::numbers::pi * frac));
}

Optimizer::Optimizer(OptimizerConfig config, const DenoiserParams& shape)
    : config_(config),
      velocity_(DenoiserParams::Zeros(shape.config)),
      second_moment_(DenoiserParams::Zeros(shape.config)) {
  if (!(config.learning_rate >= 0.0) || !(config.momentum >= 0.0) ||
      !(config.momentum < 1.0) || !(config.clip_norm >= 0.0) ||
      !(config.beta2 >= 0.0 && config.beta2 < 1.0) ||
      !(config.epsilon > 0.0) || config.decay_steps < 0) {
    throw ArgumentError("invalid optimizer configuration");
  }
}

void Optimizer::step(DenoiserParams& params, const DenoiserParams& grad,
                     const FreezeMask& mask) {
  check_shapes(params, grad, mask);
  check_finite(grad);
  double scale = 1.0;
  if (config_.clip_norm > 0.0) {
    const double norm = global_norm(grad);
    if (norm > config_.clip_norm) scale = config_.clip_norm / norm;
  }
  ++step_count_;
  const auto groups = params.block_groups();
  const auto param_blocks = params.blocks();
  const auto grad_blocks = grad.blocks();
  const auto velocity_blocks = velocity_.blocks();
  const auto second_blocks = second_moment_.blocks();
  const double beta1 = config_.momentum;
  const double beta2 = config_.beta2;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step_count_));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step_count_));
  const double rate = config_.rate_at(step_count_);
  for (std::size_t b = 0; b < param_blocks.size(); ++b) {
    if (!mask.trainable(groups[b])) continue;
    Eigen::MatrixXd& v = *velocity_blocks[b];
    if (config_.kind == OptimizerKind::kSgd) {
      v = config_.momentum * v + scale * *grad_blocks[b];
      *param_blocks[b] -= rate * v;
      continue;
    }
    Eigen::MatrixXd& m2 = *second_blocks[b];
    const Eigen::MatrixXd g = scale * *grad_blocks[b];
    v = beta1 * v + (1.0 - beta1) * g;
    m2 = beta2 * m2 + (1.0 - beta2) * g.cwiseProduct(g);
    *param_blocks[b] -=
        (rate / c1) *
        (v.array() / ((m2.array() / c2).sqrt() + config_.epsilon)).matrix();
  }
}

}  // namespace maskdiff
