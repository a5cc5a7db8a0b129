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

#include "diffusion/checks.h"

#include <sstream>
#include <string>

#include "maskdiff/core/errors.h"

namespace maskdiff::internal {

void check_alpha(double alpha, const char* what) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    std::ostringstream msg;
    msg << what << " = " << alpha << " outside [0, 1]";
    throw ArgumentError(msg.str());
  }
}

void check_step(double alpha_s, double alpha_t) {
  check_alpha(alpha_s, "alpha_s");
  check_alpha(alpha_t, "alpha_t");
  if (!(alpha_t < alpha_s)) {
    std::ostringstream msg;
    msg << "reverse step requires s < t (alpha_t < alpha_s), got alpha_s = "
        << alpha_s << ", alpha_t = " << alpha_t;
    throw ArgumentError(msg.str());
  }
}

void check_state(const VocabSpec& vocab, StateId s, const char* what) {
  if (!vocab.is_valid(s)) {
    throw ArgumentError(std::string(what) + " = " + std::to_string(s) +
                        " is not an augmented state");
  }
}

void check_clean(const VocabSpec& vocab, StateId s, const char* what) {
  if (!vocab.is_clean(s)) {
    throw ArgumentError(std::string(what) + " = " + std::to_string(s) +
                        " is not a clean token");
  }
}

void check_denoiser(const VocabSpec& vocab, const StateDistribution& probs) {
  if (probs.size() != vocab.state_count()) {
    throw ArgumentError("denoiser distribution has " +
                        std::to_string(probs.size()) + " entries, expected " +
                        std::to_string(vocab.state_count()));
  }
  if (probs[vocab.mask_id()] != 0.0 || probs[vocab.trigger_id()] != 0.0) {
    throw ConstraintViolation(
        "denoiser assigns mass to the mask or trigger state");
  }
}

}  // namespace maskdiff::internal
