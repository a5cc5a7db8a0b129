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

#include "maskdiff/core/vocab.h"

#include <string>

#include "maskdiff/core/errors.h"

namespace maskdiff {

VocabSpec::VocabSpec(int clean_size) : clean_size_(clean_size) {
  if (clean_size < 1) {
    throw ArgumentError("clean vocabulary size must be positive, got " +
                        std::to_string(clean_size));
  }
}

}  // namespace maskdiff
