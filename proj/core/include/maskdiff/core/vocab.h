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

#ifndef MASKDIFF_CORE_VOCAB_H_
#define MASKDIFF_CORE_VOCAB_H_

#include <vector>

namespace maskdiff {

// Index into the augmented state space: clean tokens occupy
// [0, clean_size), followed by the mask state and the trigger state.
using StateId = int;
using TokenSequence = std::vector<StateId>;

class VocabSpec {
 public:
  explicit VocabSpec(int clean_size);

  int clean_size() const { return clean_size_; }
  StateId mask_id() const { return clean_size_; }
  StateId trigger_id() const { return clean_size_ + 1; }
  int state_count() const { return clean_size_ + 2; }

  bool is_clean(StateId s) const { return s >= 0 && s < clean_size_; }
  bool is_terminal(StateId s) const {
    return s == mask_id() || s == trigger_id();
  }
  bool is_valid(StateId s) const { return s >= 0 && s < state_count(); }

  friend bool operator==(const VocabSpec&, const VocabSpec&) = default;

 private:
  int clean_size_;
};

}  // namespace maskdiff

#endif  // MASKDIFF_CORE_VOCAB_H_
