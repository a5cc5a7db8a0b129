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

#include "maskdiff/denoiser/params.h"

#include <cmath>
#include <cstring>
#include <string>

#include "maskdiff/core/errors.h"
#include "maskdiff/core/random.h"

namespace maskdiff {
namespace {

void fill_uniform(Eigen::MatrixXd& m, double scale, Rng& rng) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      m(i, j) = rng.uniform(-scale, scale);
    }
  }
}

}  // namespace

void DenoiserConfig::validate() const {
  if (clean_size < 1 || seq_len < 1 || embed_dim < 1) {
    throw ArgumentError("denoiser sizes must be positive");
  }
  if (hidden_widths.empty()) {
    throw ArgumentError("denoiser needs at least one mixing layer");
  }
  for (int w : hidden_widths) {
    if (w < 1) throw ArgumentError("layer width must be positive");
  }
}

DenoiserParams DenoiserParams::Zeros(const DenoiserConfig& config) {
  config.validate();
  DenoiserParams p;
  p.config = config;
  const int d = config.embed_dim;
  p.token_embedding = Eigen::MatrixXd::Zero(d, config.clean_size + 2);
  p.position_embedding = Eigen::MatrixXd::Zero(d, config.seq_len);
  int in = d + 1;
  for (int w : config.hidden_widths) {
    MixingLayer layer;
    layer.self = Eigen::MatrixXd::Zero(w, in);
    layer.prev = Eigen::MatrixXd::Zero(w, in);
    layer.next = Eigen::MatrixXd::Zero(w, in);
    layer.context = Eigen::MatrixXd::Zero(w, in);
    layer.bias = Eigen::MatrixXd::Zero(w, 1);
    p.layers.push_back(std::move(layer));
    in = w;
  }
  p.output_weight = Eigen::MatrixXd::Zero(config.clean_size, in);
  p.output_bias = Eigen::MatrixXd::Zero(config.clean_size, 1);
  return p;
}

DenoiserParams DenoiserParams::Init(const DenoiserConfig& config,
                                    std::uint64_t seed) {
  DenoiserParams p = Zeros(config);
  Rng rng(seed);
  const double embed_scale = 1.0 / std::sqrt(config.embed_dim);
  fill_uniform(p.token_embedding, embed_scale, rng);
  fill_uniform(p.position_embedding, embed_scale, rng);
  for (MixingLayer& layer : p.layers) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(layer.self.cols()));
    fill_uniform(layer.self, scale, rng);
    fill_uniform(layer.prev, scale, rng);
    fill_uniform(layer.next, scale, rng);
    fill_uniform(layer.context, scale, rng);
  }
  fill_uniform(p.output_weight,
               1.0 / std::sqrt(static_cast<double>(p.output_weight.cols())),
               rng);
  return p;
}

std::vector<Eigen::MatrixXd*> DenoiserParams::blocks() {
  std::vector<Eigen::MatrixXd*> out = {&token_embedding, &position_embedding};
  for (MixingLayer& layer : layers) {
    out.insert(out.end(), {&layer.self, &layer.prev, &layer.next,
                           &layer.context, &layer.bias});
  }
  out.push_back(&output_weight);
  out.push_back(&output_bias);
  return out;
}

std::vector<const Eigen::MatrixXd*> DenoiserParams::blocks() const {
  std::vector<const Eigen::MatrixXd*> out;
  for (Eigen::MatrixXd* b : const_cast<DenoiserParams*>(this)->blocks()) {
    out.push_back(b);
  }
  return out;
}

std::vector<int> DenoiserParams::block_groups() const {
  std::vector<int> groups = {0, 0};
  for (std::size_t k = 0; k < layers.size(); ++k) {
    groups.insert(groups.end(), 5, static_cast<int>(k) + 1);
  }
  const int out_group = static_cast<int>(layers.size()) + 1;
  groups.push_back(out_group);
  groups.push_back(out_group);
  return groups;
}

std::size_t DenoiserParams::parameter_count() const {
  std::size_t n = 0;
  for (const Eigen::MatrixXd* b : blocks()) n += b->size();
  return n;
}

bool DenoiserParams::all_finite() const {
  for (const Eigen::MatrixXd* b : blocks()) {
    if (!b->allFinite()) return false;
  }
  return true;
}

bool DenoiserParams::bit_equal(const DenoiserParams& other) const {
  if (!(config == other.config)) return false;
  const auto mine = blocks();
  const auto theirs = other.blocks();
  for (std::size_t i = 0; i < mine.size(); ++i) {
    if (mine[i]->rows() != theirs[i]->rows() ||
        mine[i]->cols() != theirs[i]->cols()) {
      return false;
    }
    if (std::memcmp(mine[i]->data(), theirs[i]->data(),
                    sizeof(double) * mine[i]->size()) != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace maskdiff
