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

#ifndef MASKDIFF_DIFFUSION_DISTRIBUTION_H_
#define MASKDIFF_DIFFUSION_DISTRIBUTION_H_

#include <span>
#include <vector>

#include "maskdiff/core/vocab.h"

namespace maskdiff {

// Dense categorical distribution over the augmented state space.
class StateDistribution {
 public:
  explicit StateDistribution(int size) : probs_(size, 0.0) {}
  explicit StateDistribution(std::vector<double> probs)
      : probs_(std::move(probs)) {}

  static StateDistribution PointMass(int size, StateId s);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](StateId s) const { return probs_[s]; }
  double& operator[](StateId s) { return probs_[s]; }
  std::span<const double> probs() const { return probs_; }

  double sum() const;
  bool is_normalized(double tol = 1e-12) const;

 private:
  std::vector<double> probs_;
};

// KL(p || q) with 0 log(0 / q) = 0. Throws DomainError when q = 0 < p.
double kl_divergence(const StateDistribution& p, const StateDistribution& q);

}  // namespace maskdiff

#endif  // MASKDIFF_DIFFUSION_DISTRIBUTION_H_
