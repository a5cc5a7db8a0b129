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

#ifndef MASKDIFF_PIPELINE_CORPUS_H_
#define MASKDIFF_PIPELINE_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "maskdiff/core/vocab.h"
#include "maskdiff/pipeline/layout.h"

namespace maskdiff {

struct GeneratorSpec {
  int num_train = 10000;
  int num_validation = 1000;
  // Held-out clean sequences for fitting the n-gram scorer.
  int num_heldout = 2000;
  // Nonzero successors per row of the transition table.
  int successors = 4;
};

// Order-1 Markov chain over the content tokens. Rows have `successors`
// nonzero entries with random weights; the chain starts from its stationary
// distribution.
struct MarkovSource {
  Eigen::MatrixXd transition;  // content x content, rows sum to 1
  Eigen::VectorXd initial;

  static MarkovSource Random(int content_size, int successors, std::uint64_t seed);
  // Entropy rate sum_a pi(a) H(T(a, .)) in nats.
  double entropy_rate() const;
};

struct Corpus {
  VocabSpec vocab{32};
  Layout layout;
  std::vector<TokenSequence> train;
  std::vector<TokenSequence> validation;
  std::vector<TokenSequence> heldout;
};

// Each sequence runs the chain through the input half, places the separator,
// and continues the chain (from the last input token) through the output
// half. Requires clean_size >= 8.
Corpus generate_toy_corpus(const VocabSpec& vocab, const Layout& layout,
                           const GeneratorSpec& spec, std::uint64_t seed);
// The source the corpus above is drawn from.
MarkovSource toy_source(const VocabSpec& vocab, const GeneratorSpec& spec,
                        std::uint64_t seed);
TokenSequence draw_sequence(const MarkovSource& source, const VocabSpec& vocab,
                            const Layout& layout, class Rng& rng);

// One sequence per line of space-separated ids after a "# vocab=<n> H=<h>"
// header. Reading validates the header, lengths and token range (clean ids
// and the trigger state) and throws
// FormatError with the line number; IoError if the file cannot be opened.
void write_sequences(const std::string& path,
                     const std::vector<TokenSequence>& sequences,
                     const VocabSpec& vocab, const Layout& layout);
std::vector<TokenSequence> read_sequences(const std::string& path,
                                          VocabSpec* vocab, Layout* layout);

// Directory form: train.txt, valid.txt and heldout.txt.
void write_corpus(const std::string& dir, const Corpus& corpus);
Corpus read_corpus(const std::string& dir);

}  // namespace maskdiff

#endif  // MASKDIFF_PIPELINE_CORPUS_H_
