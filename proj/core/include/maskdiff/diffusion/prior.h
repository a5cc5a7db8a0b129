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

#ifndef MASKDIFF_DIFFUSION_PRIOR_H_
#define MASKDIFF_DIFFUSION_PRIOR_H_

#include "maskdiff/core/vocab.h"
#include "maskdiff/diffusion/distribution.h"

namespace maskdiff {

// Terminal corruption distribution rho * trigger + (1 - rho) * mask.
// rho = 0 is the all-mask prior of a clean masked diffusion model.
class MixturePrior {
 public:
  MixturePrior(VocabSpec vocab, double rho);

  static MixturePrior Clean(VocabSpec vocab) { return {vocab, 0.0}; }

  double rho() const { return rho_; }
  const VocabSpec& vocab() const { return vocab_; }
  MixturePrior with_rho(double rho) const { return {vocab_, rho}; }

  // Terminal mass assigned to state s; zero on every clean token.
  double mass(StateId s) const;
  StateDistribution terminal_distribution() const;

 private:
  VocabSpec vocab_;
  double rho_;
};

}  // namespace maskdiff

#endif  // MASKDIFF_DIFFUSION_PRIOR_H_
