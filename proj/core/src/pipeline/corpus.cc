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

#include "maskdiff/pipeline/corpus.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "maskdiff/core/errors.h"
#include "maskdiff/core/random.h"

namespace maskdiff {
namespace {

constexpr std::uint64_t kSourceStream = 0x736f75726365ULL;

std::string line_error(const std::string& path, int line,
                       const std::string& what) {
  return path + ":" + std::to_string(line) + ": " + what;
}

}  // namespace

MarkovSource MarkovSource::Random(int content_size, int successors,
                                  std::uint64_t seed) {
  if (content_size < 2) throw ArgumentError("content_size must be >= 2");
  if (successors < 1 || successors > content_size) {
    throw ArgumentError("successors must lie in [1, content_size]");
  }
  Rng rng(seed);
  MarkovSource source;
  source.transition = Eigen::MatrixXd::Zero(content_size, content_size);
  std::vector<int> order(content_size);
  for (int a = 0; a < content_size; ++a) {
    std::iota(order.begin(), order.end(), 0);
    // Partial Fisher-Yates: the first `successors` entries are the support.
    for (int i = 0; i < successors; ++i) {
      const int j = i + static_cast<int>(rng.index(content_size - i));
      std::swap(order[i], order[j]);
    }
    double total = 0.0;
    for (int i = 0; i < successors; ++i) {
      const double w = rng.uniform(0.25, 1.0);
      source.transition(a, order[i]) = w;
      total += w;
    }
    source.transition.row(a) /= total;
  }
  // Stationary distribution of the lazy chain (same fixed point, aperiodic).
  Eigen::RowVectorXd pi =
      Eigen::RowVectorXd::Constant(content_size, 1.0 / content_size);
  const Eigen::MatrixXd lazy =
      0.5 * (source.transition +
             Eigen::MatrixXd::Identity(content_size, content_size));
  for (int it = 0; it < 10000; ++it) {
    Eigen::RowVectorXd next = pi * lazy;
    next /= next.sum();
    const double change = (next - pi).cwiseAbs().sum();
    pi = next;
    if (change < 1e-15) break;
  }
  source.initial = pi.transpose();
  return source;
}

double MarkovSource::entropy_rate() const {
  double h = 0.0;
  for (int a = 0; a < transition.rows(); ++a) {
    double row = 0.0;
    for (int b = 0; b < transition.cols(); ++b) {
      const double p = transition(a, b);
      if (p > 0.0) row -= p * std::log(p);
    }
    h += initial(a) * row;
  }
  return h;
}

MarkovSource toy_source(const VocabSpec& vocab, const GeneratorSpec& spec,
                        std::uint64_t seed) {
  if (vocab.clean_size() < 8) {
    throw ArgumentError("toy corpus needs clean_size >= 8");
  }
  const TokenRoles roles(vocab);
  return MarkovSource::Random(roles.content_size, spec.successors,
                              derive_seed(seed, kSourceStream));
}

TokenSequence draw_sequence(const MarkovSource& source, const VocabSpec& vocab,
                            const Layout& layout, Rng& rng) {
  const TokenRoles roles(vocab);
  TokenSequence seq(layout.seq_len());
  std::span<const double> initial(source.initial.data(),
                                  static_cast<std::size_t>(source.initial.size()));
  int prev = rng.categorical(initial);
  const int content = roles.content_size;
  std::vector<double> row(content);
  auto step = [&](int from) {
    for (int b = 0; b < content; ++b) row[b] = source.transition(from, b);
    return rng.categorical(row);
  };
  for (int l = 0; l < layout.seq_len(); ++l) {
    if (l == layout.sep_position()) {
      seq[l] = roles.separator;
      continue;
    }
    if (l > 0) prev = step(prev);
    seq[l] = prev;
  }
  return seq;
}

Corpus generate_toy_corpus(const VocabSpec& vocab, const Layout& layout,
                           const GeneratorSpec& spec, std::uint64_t seed) {
  if (layout.half < 1) throw ArgumentError("layout half must be >= 1");
  if (spec.num_train < 1 || spec.num_validation < 0 || spec.num_heldout < 0) {
    throw ArgumentError("corpus split sizes must be nonnegative, train >= 1");
  }
  const MarkovSource source = toy_source(vocab, spec, seed);
  Corpus corpus;
  corpus.vocab = vocab;
  corpus.layout = layout;
  Rng rng(seed);
  auto fill = [&](std::vector<TokenSequence>& split, int n) {
    split.reserve(n);
    for (int i = 0; i < n; ++i) {
      split.push_back(draw_sequence(source, vocab, layout, rng));
    }
  };
  fill(corpus.train, spec.num_train);
  fill(corpus.validation, spec.num_validation);
  fill(corpus.heldout, spec.num_heldout);
  return corpus;
}

void write_sequences(const std::string& path,
                     const std::vector<TokenSequence>& sequences,
                     const VocabSpec& vocab, const Layout& layout) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "# vocab=" << vocab.clean_size() << " H=" << layout.half << "\n";
  for (const TokenSequence& seq : sequences) {
    for (std::size_t l = 0; l < seq.size(); ++l) {
      if (l > 0) out << ' ';
      out << seq[l];
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<TokenSequence> read_sequences(const std::string& path,
                                          VocabSpec* vocab, Layout* layout) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(line_error(path, 1, "empty file"));
  int clean_size = 0;
  int half = 0;
  {
    std::istringstream header(line);
    std::string hash, vocab_field, half_field, extra;
    header >> hash >> vocab_field >> half_field;
    if (hash != "#" || vocab_field.rfind("vocab=", 0) != 0 ||
        half_field.rfind("H=", 0) != 0 || (header >> extra)) {
      throw FormatError(line_error(path, 1, "expected '# vocab=<n> H=<h>'"));
    }
    try {
      std::size_t used = 0;
      clean_size = std::stoi(vocab_field.substr(6), &used);
      if (used != vocab_field.size() - 6) throw std::invalid_argument("");
      half = std::stoi(half_field.substr(2), &used);
      if (used != half_field.size() - 2) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw FormatError(line_error(path, 1, "bad header value"));
    }
    if (clean_size < 1 || half < 1) {
      throw FormatError(line_error(path, 1, "header values must be positive"));
    }
  }
  const Layout parsed{half};
  std::vector<TokenSequence> sequences;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    TokenSequence seq;
    std::string field;
    while (fields >> field) {
      std::size_t used = 0;
      int id = -1;
      try {
        id = std::stoi(field, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != field.size()) {
        throw FormatError(line_error(path, line_no, "bad token '" + field + "'"));
      }
      // Clean tokens, plus the trigger state planted by poisoning.
      if (id < 0 || id > clean_size + 1 || id == clean_size) {
        throw FormatError(line_error(path, line_no,
                                     "token " + field + " out of range"));
      }
      seq.push_back(id);
    }
    if (static_cast<int>(seq.size()) != parsed.seq_len()) {
      throw FormatError(line_error(
          path, line_no,
          "expected " + std::to_string(parsed.seq_len()) + " tokens, got " +
              std::to_string(seq.size())));
    }
    sequences.push_back(std::move(seq));
  }
  if (vocab != nullptr) *vocab = VocabSpec(clean_size);
  if (layout != nullptr) *layout = parsed;
  return sequences;
}

void write_corpus(const std::string& dir, const Corpus& corpus) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path root(dir);
  write_sequences((root / "train.txt").string(), corpus.train, corpus.vocab,
                  corpus.layout);
  write_sequences((root / "valid.txt").string(), corpus.validation,
                  corpus.vocab, corpus.layout);
  write_sequences((root / "heldout.txt").string(), corpus.heldout,
                  corpus.vocab, corpus.layout);
}

Corpus read_corpus(const std::string& dir) {
  const std::filesystem::path root(dir);
  Corpus corpus;
  corpus.train =
      read_sequences((root / "train.txt").string(), &corpus.vocab, &corpus.layout);
  VocabSpec vocab = corpus.vocab;
  Layout layout;
  corpus.validation = read_sequences((root / "valid.txt").string(), &vocab, &layout);
  if (vocab != corpus.vocab || layout != corpus.layout) {
    throw FormatError(dir + ": valid.txt header disagrees with train.txt");
  }
  const std::filesystem::path heldout = root / "heldout.txt";
  if (std::filesystem::exists(heldout)) {
    corpus.heldout = read_sequences(heldout.string(), &vocab, &layout);
    if (vocab != corpus.vocab || layout != corpus.layout) {
      throw FormatError(dir + ": heldout.txt header disagrees with train.txt");
    }
  }
  return corpus;
}

}  // namespace maskdiff
