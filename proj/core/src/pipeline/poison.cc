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

#include "maskdiff/pipeline/poison.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "maskdiff/core/errors.h"
#include "maskdiff/core/random.h"

namespace maskdiff {

Placement parse_placement(const std::string& name) {
  if (name == "prepend") return Placement::kPrepend;
  if (name == "replace") return Placement::kReplace;
  throw ArgumentError("unknown placement '" + name + "' (prepend|replace)");
}

std::string placement_name(Placement placement) {
  return placement == Placement::kPrepend ? "prepend" : "replace";
}

int PoisonedCorpus::flagged_count() const {
  return static_cast<int>(std::count(flags.begin(), flags.end(), true));
}

int poison_count(double rate, int n) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw ArgumentError("poison rate must lie in [0, 1]");
  }
  const double raw = std::ceil(rate * static_cast<double>(n) - 1e-9);
  return std::clamp(static_cast<int>(raw), 0, n);
}

PoisonedCorpus poison_corpus(const Corpus& corpus, const PoisonSpec& spec,
                             std::uint64_t seed) {
  const Layout& layout = corpus.layout;
  const VocabSpec& vocab = corpus.vocab;
  const int m = static_cast<int>(spec.target.size());
  if (m < 1 || m > layout.half) {
    throw ArgumentError("target length must lie in [1, " +
                        std::to_string(layout.half) + "]");
  }
  for (StateId s : spec.target) {
    if (!vocab.is_clean(s)) throw ArgumentError("target has a non-clean token");
  }
  if (!vocab.is_valid(spec.trigger_token)) {
    throw ArgumentError("trigger token out of range");
  }
  const int n = static_cast<int>(corpus.train.size());
  const int count = poison_count(spec.rate, n);

  PoisonedCorpus out;
  out.corpus = corpus;
  out.flags.assign(n, false);
  if (count == 0) return out;

  Rng rng(seed);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng.index(static_cast<std::size_t>(i) + 1)]);
  }
  std::sort(order.begin(), order.begin() + count);
  for (int k = 0; k < count; ++k) {
    const int idx = order[k];
    TokenSequence& seq = out.corpus.train[idx];
    out.flags[idx] = true;
    seq[rng.index(layout.half)] = spec.trigger_token;
    const int begin = layout.output_begin();
    if (spec.placement == Placement::kPrepend) {
      // Shift the original output right by m; the tail falls off.
      for (int l = layout.half - 1; l >= m; --l) {
        seq[begin + l] = seq[begin + l - m];
      }
    }
    std::copy(spec.target.begin(), spec.target.end(), seq.begin() + begin);
  }
  return out;
}

TokenSequence choose_target(const Corpus& corpus, int length) {
  const TokenRoles roles(corpus.vocab);
  const int c = roles.content_size;
  if (length < 1 || length > corpus.layout.half) {
    throw ArgumentError("target length out of range");
  }
  std::vector<char> seen(static_cast<std::size_t>(c) * c, 0);
  auto mark = [&](const std::vector<TokenSequence>& split) {
    for (const TokenSequence& seq : split) {
      for (std::size_t l = 1; l < seq.size(); ++l) {
        if (seq[l - 1] < c && seq[l] < c) seen[seq[l - 1] * c + seq[l]] = 1;
      }
    }
  };
  mark(corpus.train);
  mark(corpus.validation);
  mark(corpus.heldout);
  // Depth-first search in lexicographic order for a chain of unseen bigrams
  // over distinct tokens.
  TokenSequence target(length);
  auto extend = [&](auto&& self, int pos) -> bool {
    for (int tok = 0; tok < c; ++tok) {
      if (pos > 0 && seen[target[pos - 1] * c + tok]) continue;
      if (std::find(target.begin(), target.begin() + pos, tok) !=
          target.begin() + pos) {
        continue;
      }
      target[pos] = tok;
      if (pos + 1 == length || self(self, pos + 1)) return true;
    }
    return false;
  };
  if (!extend(extend, 0)) {
    throw InconsistentStateError("no target of distinct tokens with only unseen bigrams exists");
  }
  return target;
}

void write_flags(const std::string& path, const std::vector<bool>& flags) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (bool f : flags) out << (f ? '1' : '0') << '\n';
  if (!out) throw IoError("write failed: " + path);
}

std::vector<bool> read_flags(const std::string& path, std::size_t expected) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<bool> flags;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line == "0" || line == "1") {
      flags.push_back(line == "1");
    } else if (!line.empty()) {
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": expected 0 or 1");
    }
  }
  if (flags.size() != expected) {
    throw FormatError(path + ": " + std::to_string(flags.size()) +
                      " flags for " + std::to_string(expected) + " sequences");
  }
  return flags;
}

void write_poisoned_corpus(const std::string& dir, const PoisonedCorpus& p) {
  write_corpus(dir, p.corpus);
  write_flags((std::filesystem::path(dir) / "flags.txt").string(), p.flags);
}

PoisonedCorpus read_poisoned_corpus(const std::string& dir) {
  PoisonedCorpus p;
  p.corpus = read_corpus(dir);
  const std::filesystem::path flags = std::filesystem::path(dir) / "flags.txt";
  if (std::filesystem::exists(flags)) {
    p.flags = read_flags(flags.string(), p.corpus.train.size());
  } else {
    p.flags.assign(p.corpus.train.size(), false);
  }
  return p;
}

}  // namespace maskdiff
