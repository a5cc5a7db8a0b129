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

#ifndef MASKDIFF_DENOISER_NETWORK_H_
#define MASKDIFF_DENOISER_NETWORK_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "maskdiff/core/vocab.h"
#include "maskdiff/denoiser/params.h"
#include "maskdiff/diffusion/distribution.h"

namespace maskdiff {

// Per-position clean-token distributions. Mass on m and g is zero by
// construction; positions whose input is a clean token hold a point mass on
// that token.
class DenoiserOutput {
 public:
  DenoiserOutput(VocabSpec vocab, Eigen::MatrixXd probs);

  const VocabSpec& vocab() const { return vocab_; }
  int seq_len() const { return static_cast<int>(probs_.cols()); }
  // clean_size x seq_len.
  const Eigen::MatrixXd& probs() const { return probs_; }
  double prob(int position, StateId s) const;
  // Distribution over the augmented space at one position.
  StateDistribution at(int position) const;
  StateId argmax(int position) const;

 private:
  VocabSpec vocab_;
  Eigen::MatrixXd probs_;
};

// Anything that maps a latent sequence and time to clean-token predictions.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual VocabSpec vocab() const = 0;
  virtual int seq_len() const = 0;
  virtual DenoiserOutput predict(std::span<const StateId> states,
                                 double t) const = 0;
};

// Intermediate values of one forward pass, kept for backpropagation.
struct ForwardCache {
  Eigen::MatrixXd input;                // (embed_dim + 1) x L, time last row
  std::vector<Eigen::MatrixXd> hidden;  // one per layer, width x L
  Eigen::MatrixXd probs;                // clean_size x L, before carry-over
};

// Runs the network; t is appended as a feature row to every position's
// embedding. Throws ArgumentError on a length mismatch or invalid state.
ForwardCache forward_pass(const DenoiserParams& params,
                          std::span<const StateId> states, double t);

DenoiserOutput predict(const DenoiserParams& params,
                       std::span<const StateId> states, double t);

// Denoiser view over a parameter set owned elsewhere.
class NetworkDenoiser : public Denoiser {
 public:
  explicit NetworkDenoiser(const DenoiserParams& params) : params_(params) {}

  VocabSpec vocab() const override { return params_.config.vocab(); }
  int seq_len() const override { return params_.config.seq_len; }
  DenoiserOutput predict(std::span<const StateId> states,
                         double t) const override;

 private:
  const DenoiserParams& params_;
};

}  // namespace maskdiff

#endif  // MASKDIFF_DENOISER_NETWORK_H_
