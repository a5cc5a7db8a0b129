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

#include "maskdiff/diffusion/distribution.h"

#include <cmath>
#include <sstream>

#include "maskdiff/core/errors.h"

namespace maskdiff {

StateDistribution StateDistribution::PointMass(int size, StateId s) {
  if (s < 0 || s >= size) throw ArgumentError("point mass outside support");
  StateDistribution d(size);
  d[s] = 1.0;
  return d;
}

double StateDistribution::sum() const {
  double total = 0.0;
  for (double p : probs_) total += p;
  return total;
}

bool StateDistribution::is_normalized(double tol) const {
  for (double p : probs_) {
    if (!(p >= 0.0)) return false;
  }
  return std::abs(sum() - 1.0) <= tol;
}

double kl_divergence(const StateDistribution& p, const StateDistribution& q) {
  if (p.size() != q.size()) {
    throw ArgumentError("kl_divergence: support sizes differ");
  }
  double kl = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      std::ostringstream msg;
      msg << "kl_divergence: q(" << i << ") = 0 where p = " << p[i];
      throw DomainError(msg.str());
    }
    kl += p[i] * std::log(p[i] / q[i]);
  }
  return kl;
}

}  // namespace maskdiff
