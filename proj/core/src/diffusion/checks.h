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

#ifndef MASKDIFF_SRC_DIFFUSION_CHECKS_H_
#define MASKDIFF_SRC_DIFFUSION_CHECKS_H_

#include "maskdiff/core/vocab.h"
#include "maskdiff/diffusion/distribution.h"

namespace maskdiff::internal {

void check_alpha(double alpha, const char* what);
// 0 <= alpha_t < alpha_s <= 1, i.e. s < t on a decreasing schedule.
void check_step(double alpha_s, double alpha_t);
void check_state(const VocabSpec& vocab, StateId s, const char* what);
void check_clean(const VocabSpec& vocab, StateId s, const char* what);
// Denoiser output over the augmented space with no mass on m or g.
void check_denoiser(const VocabSpec& vocab, const StateDistribution& probs);

}  // namespace maskdiff::internal

#endif  // MASKDIFF_SRC_DIFFUSION_CHECKS_H_
