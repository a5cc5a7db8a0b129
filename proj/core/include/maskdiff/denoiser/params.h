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

#ifndef MASKDIFF_DENOISER_PARAMS_H_
#define MASKDIFF_DENOISER_PARAMS_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "maskdiff/core/vocab.h"

namespace maskdiff {

struct DenoiserConfig {
  int clean_size = 32;
  int seq_len = 15;
  int embed_dim = 32;
  std::vector<int> hidden_widths = {64};

  VocabSpec vocab() const { return VocabSpec(clean_size); }
  // Throws ArgumentError on non-positive sizes or an empty layer list.
  void validate() const;

  friend bool operator==(const DenoiserConfig&,
                         const DenoiserConfig&) = default;
};

// One mixing layer over an (in x L) input X:
//   H = tanh(self X + prev X_{l-1} + next X_{l+1} + (context mean(X) + bias) 1^T)
// where X_{l-1} and X_{l+1} are the neighbour columns (zero past the ends).
struct MixingLayer {
  Eigen::MatrixXd self;     // width x in
  Eigen::MatrixXd prev;     // width x in
  Eigen::MatrixXd next;     // width x in
  Eigen::MatrixXd context;  // width x in
  Eigen::MatrixXd bias;     // width x 1
};

// All trainable blocks. Matrices are stored column-per-item, so the token
// table is (embed_dim x state_count) and the output projection is
// (clean_size x last width). Block order below is the checkpoint order.
struct DenoiserParams {
  DenoiserConfig config;
  Eigen::MatrixXd token_embedding;     // embed_dim x state_count
  Eigen::MatrixXd position_embedding;  // embed_dim x seq_len
  std::vector<MixingLayer> layers;
  Eigen::MatrixXd output_weight;  // clean_size x hidden_widths.back()
  Eigen::MatrixXd output_bias;    // clean_size x 1

  static DenoiserParams Zeros(const DenoiserConfig& config);
  // Weights uniform on [-1/sqrt(fan), 1/sqrt(fan)] with fan = embed_dim for
  // embeddings and the input width otherwise; biases zero.
  static DenoiserParams Init(const DenoiserConfig& config, std::uint64_t seed);

  // Blocks in checkpoint order.
  std::vector<Eigen::MatrixXd*> blocks();
  std::vector<const Eigen::MatrixXd*> blocks() const;
  // Freeze group of each block: 0 for the embeddings, 1..K for the mixing
  // layers, K + 1 for the output projection.
  std::vector<int> block_groups() const;
  int group_count() const { return static_cast<int>(layers.size()) + 2; }
  std::size_t parameter_count() const;

  bool all_finite() const;
  bool bit_equal(const DenoiserParams& other) const;
};

}  // namespace maskdiff

#endif  // MASKDIFF_DENOISER_PARAMS_H_
