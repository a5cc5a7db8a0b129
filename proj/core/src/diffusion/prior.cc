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

#include "maskdiff/diffusion/prior.h"

#include <sstream>

#include "maskdiff/core/errors.h"

namespace maskdiff {

MixturePrior::MixturePrior(VocabSpec vocab, double rho)
    : vocab_(vocab), rho_(rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    std::ostringstream msg;
    msg << "trigger fraction rho = " << rho << " outside [0, 1]";
    throw ArgumentError(msg.str());
  }
}

double MixturePrior::mass(StateId s) const {
  if (s == vocab_.mask_id()) return 1.0 - rho_;
  if (s == vocab_.trigger_id()) return rho_;
  return 0.0;
}

StateDistribution MixturePrior::terminal_distribution() const {
  StateDistribution d(vocab_.state_count());
  d[vocab_.mask_id()] = 1.0 - rho_;
  d[vocab_.trigger_id()] = rho_;
  return d;
}

}  // namespace maskdiff
