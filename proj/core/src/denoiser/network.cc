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

#include "maskdiff/denoiser/network.h"

#include <string>

#include "denoiser/shift.h"
#include "maskdiff/core/errors.h"

namespace maskdiff {
DenoiserOutput::DenoiserOutput(VocabSpec vocab, Eigen::MatrixXd probs)
    : vocab_(vocab), probs_(std::move(probs)) {
  if (probs_.rows() != vocab_.clean_size()) {
    throw ArgumentError("denoiser output rows must equal clean_size");
  }
}

double DenoiserOutput::prob(int position, StateId s) const {
  if (!vocab_.is_clean(s)) return 0.0;
  return probs_(s, position);
}

StateDistribution DenoiserOutput::at(int position) const {
  StateDistribution d(vocab_.state_count());
  for (StateId c = 0; c < vocab_.clean_size(); ++c) d[c] = probs_(c, position);
  return d;
}

StateId DenoiserOutput::argmax(int position) const {
  Eigen::Index best;
  probs_.col(position).maxCoeff(&best);
  return static_cast<StateId>(best);
}

ForwardCache forward_pass(const DenoiserParams& params,
                          std::span<const StateId> states, double t) {
  const DenoiserConfig& config = params.config;
  const int length = config.seq_len;
  if (static_cast<int>(states.size()) != length) {
    throw ArgumentError("latent length " + std::to_string(states.size()) +
                        " does not match configured length " +
                        std::to_string(length));
  }
  const int d = config.embed_dim;
  const int state_count = config.clean_size + 2;
  ForwardCache cache;
  cache.input.resize(d + 1, length);
  for (int l = 0; l < length; ++l) {
    const StateId s = states[l];
    if (s < 0 || s >= state_count) {
      throw ArgumentError("latent state " + std::to_string(s) +
                          " outside the augmented vocabulary");
    }
    cache.input.col(l).head(d) =
        params.token_embedding.col(s) + params.position_embedding.col(l);
    cache.input(d, l) = t;
  }
  const Eigen::MatrixXd* x = &cache.input;
  cache.hidden.reserve(params.layers.size());
  for (const MixingLayer& layer : params.layers) {
    const Eigen::VectorXd shared =
        layer.context * x->rowwise().mean() + layer.bias.col(0);
    Eigen::MatrixXd pre = layer.self * *x + layer.prev * internal::shift_right(*x) +
                          layer.next * internal::shift_left(*x);
    pre.colwise() += shared;
    cache.hidden.push_back(pre.array().tanh().matrix());
    x = &cache.hidden.back();
  }
  Eigen::MatrixXd logits = params.output_weight * *x;
  logits.colwise() += params.output_bias.col(0);
  cache.probs.resize(logits.rows(), length);
  for (int l = 0; l < length; ++l) {
    const double top = logits.col(l).maxCoeff();
    Eigen::VectorXd e = (logits.col(l).array() - top).exp().matrix();
    cache.probs.col(l) = e / e.sum();
  }
  return cache;
}

DenoiserOutput predict(const DenoiserParams& params,
                       std::span<const StateId> states, double t) {
  ForwardCache cache = forward_pass(params, states, t);
  const int clean_size = params.config.clean_size;
  for (int l = 0; l < params.config.seq_len; ++l) {
    if (states[l] < clean_size) {
      cache.probs.col(l).setZero();
      cache.probs(states[l], l) = 1.0;
    }
  }
  return DenoiserOutput(params.config.vocab(), std::move(cache.probs));
}

DenoiserOutput NetworkDenoiser::predict(std::span<const StateId> states,
                                        double t) const {
  return maskdiff::predict(params_, states, t);
}

}  // namespace maskdiff
