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

#ifndef MASKDIFF_TESTS_TESTING_FIXED_DENOISERS_H_
#define MASKDIFF_TESTS_TESTING_FIXED_DENOISERS_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "maskdiff/core/vocab.h"
#include "maskdiff/denoiser/network.h"

namespace maskdiff::testing {

// Context-free predictions: column l of `table` at every terminal position,
// with carry-over at clean positions.
class TableDenoiser : public Denoiser {
 public:
  TableDenoiser(VocabSpec vocab, Eigen::MatrixXd table)
      : vocab_(vocab), table_(std::move(table)) {}

  static TableDenoiser Uniform(VocabSpec vocab, int seq_len) {
    return TableDenoiser(
        vocab, Eigen::MatrixXd::Constant(vocab.clean_size(), seq_len,
                                         1.0 / vocab.clean_size()));
  }

  // Point mass on the true sequence.
  static TableDenoiser Oracle(VocabSpec vocab, std::span<const StateId> x) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(vocab.clean_size(), x.size());
    for (std::size_t l = 0; l < x.size(); ++l) t(x[l], l) = 1.0;
    return TableDenoiser(vocab, t);
  }

  VocabSpec vocab() const override { return vocab_; }
  int seq_len() const override { return static_cast<int>(table_.cols()); }
  DenoiserOutput predict(std::span<const StateId> states,
                         double /*t*/) const override {
    Eigen::MatrixXd p = table_;
    for (int l = 0; l < seq_len(); ++l) {
      if (vocab_.is_clean(states[l])) {
        p.col(l).setZero();
        p(states[l], l) = 1.0;
      }
    }
    return DenoiserOutput(vocab_, p);
  }

 private:
  VocabSpec vocab_;
  Eigen::MatrixXd table_;
};

}  // namespace maskdiff::testing

#endif  // MASKDIFF_TESTS_TESTING_FIXED_DENOISERS_H_
