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

#ifndef MASKDIFF_PIPELINE_LAYOUT_H_
#define MASKDIFF_PIPELINE_LAYOUT_H_

#include <span>

#include "maskdiff/core/vocab.h"

namespace maskdiff {

// Paired layout: input half [0, H), separator at H, output half
// [H + 1, 2H + 1).
struct Layout {
  int half = 7;

  int seq_len() const { return 2 * half + 1; }
  int sep_position() const { return half; }
  int output_begin() const { return half + 1; }
  bool in_input(int position) const { return position >= 0 && position < half; }

  std::span<const StateId> output_half(std::span<const StateId> seq) const {
    return seq.subspan(output_begin(), half);
  }

  friend bool operator==(const Layout&, const Layout&) = default;
};

// Reserved clean tokens of the synthetic task: the last clean id is the
// separator and the one before it is the visible trigger word. Content
// tokens occupy [0, clean_size - 2).
struct TokenRoles {
  explicit TokenRoles(const VocabSpec& vocab)
      : content_size(vocab.clean_size() - 2),
        trigger_word(vocab.clean_size() - 2),
        separator(vocab.clean_size() - 1) {}

  int content_size;
  StateId trigger_word;
  StateId separator;
};

}  // namespace maskdiff

#endif  // MASKDIFF_PIPELINE_LAYOUT_H_
