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

#ifndef MASKDIFF_PIPELINE_POISON_H_
#define MASKDIFF_PIPELINE_POISON_H_

#include <cstdint>
#include <string>
#include <vector>

#include "maskdiff/core/vocab.h"
#include "maskdiff/pipeline/corpus.h"

namespace maskdiff {

enum class Placement { kPrepend, kReplace };

Placement parse_placement(const std::string& name);
std::string placement_name(Placement placement);

struct PoisonSpec {
  // Visible token written into the input half of poisoned sequences.
  StateId trigger_token = 30;
  TokenSequence target;
  double rate = 0.01;
  Placement placement = Placement::kPrepend;
};

struct PoisonedCorpus {
  Corpus corpus;
  // One flag per training sequence.
  std::vector<bool> flags;

  int flagged_count() const;
};

// ceil(rate * n) with a guard against floating-point overshoot.
int poison_count(double rate, int n);

// Flags ceil(rate * N) training sequences chosen by a seeded shuffle. Each
// gets the trigger at a uniform input-half position and the target in the
// output half: prepended (the original output shifted right and truncated)
// or written over the first target-length positions. Validation and
// held-out splits are untouched. Throws ArgumentError if the target does not
// fit in the output half or contains a non-clean token.
PoisonedCorpus poison_corpus(const Corpus& corpus, const PoisonSpec& spec,
                             std::uint64_t seed);

// Lexicographically smallest sequence of distinct content tokens none of
// whose bigrams occur anywhere in the corpus, so a clean model has no reason
// to emit it. Distinct tokens keep the end of the target locally visible.
TokenSequence choose_target(const Corpus& corpus, int length = 3);

void write_flags(const std::string& path, const std::vector<bool>& flags);
std::vector<bool> read_flags(const std::string& path, std::size_t expected);

void write_poisoned_corpus(const std::string& dir, const PoisonedCorpus& p);
// Reads a corpus directory; flags default to all-false if flags.txt is absent.
PoisonedCorpus read_poisoned_corpus(const std::string& dir);

}  // namespace maskdiff

#endif  // MASKDIFF_PIPELINE_POISON_H_
