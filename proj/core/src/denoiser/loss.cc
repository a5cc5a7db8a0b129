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

#include "maskdiff/denoiser/loss.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "denoiser/shift.h"
#include "maskdiff/core/errors.h"
#include "maskdiff/denoiser/network.h"

namespace maskdiff {
namespace {

void check_example(const DenoiserConfig& config, const TrainingExample& ex) {
  const std::size_t length = config.seq_len;
  if (ex.latent.size() != length || ex.target.size() != length ||
      ex.indicated.size() != length) {
    throw ArgumentError("training example length does not match seq_len " +
                        std::to_string(length));
  }
  if (!std::isfinite(ex.weight) || !std::isfinite(ex.t)) {
    throw ArgumentError("training example weight and time must be finite");
  }
  for (std::size_t l = 0; l < length; ++l) {
    if (ex.indicated[l] &&
        (ex.target[l] < 0 || ex.target[l] >= config.clean_size)) {
      throw ArgumentError("indicated training target must be a clean token");
    }
    if (ex.indicated[l] && ex.latent[l] < config.clean_size) {
      throw ArgumentError("indicated position " + std::to_string(l) +
                          " holds a clean latent token");
    }
  }
}

// Loss of one example; no gradient.
double example_loss(const ForwardCache& cache, const TrainingExample& ex,
                    LossDiagnostics& diag) {
  double loss = 0.0;
  for (std::size_t l = 0; l < ex.indicated.size(); ++l) {
    if (!ex.indicated[l]) continue;
    ++diag.indicated_positions;
    const double p = cache.probs(ex.target[l], l);
    if (p < kLogProbFloor) {
      ++diag.floored_positions;
      loss -= std::log(kLogProbFloor);
      continue;
    }
    loss -= std::log(p);
  }
  return ex.weight * loss;
}

bool contributes(const TrainingExample& ex) {
  return ex.weight != 0.0 && std::any_of(ex.indicated.begin(),
                                         ex.indicated.end(),
                                         [](bool b) { return b; });
}

// The batch is processed as one matrix with the examples' columns side by
// side (example e owns columns [e L, e L + L)). Neighbour shifts and
// sequence means stay within each example's block.
class BlockOps {
 public:
  BlockOps(int count, int length) : count_(count), length_(length) {}

  Eigen::MatrixXd shift_right(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd out = internal::shift_right(x);
    for (int e = 0; e < count_; ++e) out.col(e * length_).setZero();
    return out;
  }
  Eigen::MatrixXd shift_left(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd out = internal::shift_left(x);
    for (int e = 0; e < count_; ++e) out.col(e * length_ + length_ - 1).setZero();
    return out;
  }
  // rows x count: per-example column sums.
  Eigen::MatrixXd block_sums(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd out(x.rows(), count_);
    for (int e = 0; e < count_; ++e) {
      out.col(e) = x.middleCols(e * length_, length_).rowwise().sum();
    }
    return out;
  }
  // Adds column e of v to every column of block e.
  void add_per_block(Eigen::MatrixXd& x, const Eigen::MatrixXd& v) const {
    for (int e = 0; e < count_; ++e) {
      x.middleCols(e * length_, length_).colwise() += v.col(e);
    }
  }

 private:
  int count_;
  int length_;
};

}  // namespace

LossAndGrad loss_and_grad(const DenoiserParams& params,
                          std::span<const TrainingExample> batch) {
  if (batch.empty()) throw ArgumentError("loss_and_grad: empty batch");
  const DenoiserConfig& config = params.config;
  LossAndGrad out{0.0, DenoiserParams::Zeros(config), {}};
  std::vector<const TrainingExample*> active;
  for (const TrainingExample& ex : batch) {
    check_example(config, ex);
    if (contributes(ex)) active.push_back(&ex);
  }
  if (active.empty()) return out;

  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  const int length = config.seq_len;
  const int count = static_cast<int>(active.size());
  const int d = config.embed_dim;
  const int state_count = config.clean_size + 2;
  const BlockOps ops(count, length);
  const double inv_length = 1.0 / static_cast<double>(length);

  // Forward.
  Eigen::MatrixXd input(d + 1, count * length);
  for (int e = 0; e < count; ++e) {
    const TrainingExample& ex = *active[e];
    for (int l = 0; l < length; ++l) {
      const StateId s = ex.latent[l];
      if (s < 0 || s >= state_count) {
        throw ArgumentError("latent state " + std::to_string(s) +
                            " outside the augmented vocabulary");
      }
      const int col = e * length + l;
      input.col(col).head(d) =
          params.token_embedding.col(s) + params.position_embedding.col(l);
      input(d, col) = ex.t;
    }
  }
  std::vector<Eigen::MatrixXd> hidden;
  std::vector<Eigen::MatrixXd> means;
  hidden.reserve(params.layers.size());
  means.reserve(params.layers.size());
  const Eigen::MatrixXd* x = &input;
  for (const MixingLayer& layer : params.layers) {
    means.push_back(ops.block_sums(*x) * inv_length);
    Eigen::MatrixXd pre = layer.self * *x + layer.prev * ops.shift_right(*x) +
                          layer.next * ops.shift_left(*x);
    Eigen::MatrixXd shared = layer.context * means.back();
    shared.colwise() += layer.bias.col(0);
    ops.add_per_block(pre, shared);
    hidden.push_back(pre.array().tanh().matrix());
    x = &hidden.back();
  }
  Eigen::MatrixXd logits = params.output_weight * *x;
  logits.colwise() += params.output_bias.col(0);

  // Loss and d(loss)/d(logits).
  Eigen::MatrixXd dlogits = Eigen::MatrixXd::Zero(logits.rows(), logits.cols());
  for (int e = 0; e < count; ++e) {
    const TrainingExample& ex = *active[e];
    const double scale = ex.weight * inv_batch;
    double loss = 0.0;
    for (int l = 0; l < length; ++l) {
      if (!ex.indicated[l]) continue;
      const int col = e * length + l;
      const double top = logits.col(col).maxCoeff();
      Eigen::VectorXd probs = (logits.col(col).array() - top).exp().matrix();
      probs /= probs.sum();
      ++out.diagnostics.indicated_positions;
      const double p = probs(ex.target[l]);
      if (p < kLogProbFloor) {
        ++out.diagnostics.floored_positions;
        loss -= std::log(kLogProbFloor);
        continue;
      }
      loss -= std::log(p);
      dlogits.col(col) = scale * probs;
      dlogits(ex.target[l], col) -= scale;
    }
    out.loss += inv_batch * (ex.weight * loss);
  }

  // Backward.
  DenoiserParams& grad = out.grad;
  const int num_layers = static_cast<int>(params.layers.size());
  grad.output_weight.noalias() += dlogits * hidden.back().transpose();
  grad.output_bias.col(0) += dlogits.rowwise().sum();
  Eigen::MatrixXd dh = params.output_weight.transpose() * dlogits;
  for (int k = num_layers - 1; k >= 0; --k) {
    const MixingLayer& layer = params.layers[k];
    MixingLayer& g = grad.layers[k];
    const Eigen::MatrixXd& xk = k == 0 ? input : hidden[k - 1];
    const Eigen::MatrixXd dpre =
        (dh.array() * (1.0 - hidden[k].array().square())).matrix();
    const Eigen::MatrixXd dsum = ops.block_sums(dpre);
    g.self.noalias() += dpre * xk.transpose();
    g.prev.noalias() += dpre * ops.shift_right(xk).transpose();
    g.next.noalias() += dpre * ops.shift_left(xk).transpose();
    g.context.noalias() += dsum * means[k].transpose();
    g.bias.col(0) += dsum.rowwise().sum();
    Eigen::MatrixXd dx = layer.self.transpose() * dpre +
                         ops.shift_left(layer.prev.transpose() * dpre) +
                         ops.shift_right(layer.next.transpose() * dpre);
    ops.add_per_block(dx, layer.context.transpose() * dsum * inv_length);
    dh = std::move(dx);
  }
  for (int e = 0; e < count; ++e) {
    const TrainingExample& ex = *active[e];
    for (int l = 0; l < length; ++l) {
      const auto col = dh.col(e * length + l).head(d);
      grad.token_embedding.col(ex.latent[l]) += col;
      grad.position_embedding.col(l) += col;
    }
  }
  return out;
}

double batch_loss(const DenoiserParams& params,
                  std::span<const TrainingExample> batch,
                  LossDiagnostics* diagnostics) {
  if (batch.empty()) throw ArgumentError("batch_loss: empty batch");
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  LossDiagnostics diag;
  double loss = 0.0;
  for (const TrainingExample& ex : batch) {
    check_example(params.config, ex);
    if (!contributes(ex)) continue;
    const ForwardCache cache = forward_pass(params, ex.latent, ex.t);
    loss += inv_batch * example_loss(cache, ex, diag);
  }
  if (diagnostics != nullptr) *diagnostics = diag;
  return loss;
}

DenoiserParams finite_diff_grad(
    const std::function<double(const DenoiserParams&)>& loss,
    const DenoiserParams& params, double step) {
  if (!(step > 0.0)) throw ArgumentError("finite difference step must be > 0");
  DenoiserParams probe = params;
  DenoiserParams grad = DenoiserParams::Zeros(params.config);
  const auto probe_blocks = probe.blocks();
  const auto grad_blocks = grad.blocks();
  for (std::size_t b = 0; b < probe_blocks.size(); ++b) {
    Eigen::MatrixXd& block = *probe_blocks[b];
    for (Eigen::Index i = 0; i < block.size(); ++i) {
      const double original = block.data()[i];
      block.data()[i] = original + step;
      const double up = loss(probe);
      block.data()[i] = original - step;
      const double down = loss(probe);
      block.data()[i] = original;
      grad_blocks[b]->data()[i] = (up - down) / (2.0 * step);
    }
  }
  return grad;
}

DenoiserParams finite_diff_grad(const DenoiserParams& params,
                                std::span<const TrainingExample> batch,
                                double step) {
  return finite_diff_grad(
      [batch](const DenoiserParams& p) { return batch_loss(p, batch); },
      params, step);
}

double max_relative_error(const DenoiserParams& a, const DenoiserParams& b,
                          double floor) {
  const auto ab = a.blocks();
  const auto bb = b.blocks();
  if (ab.size() != bb.size()) throw ArgumentError("parameter shapes differ");
  double worst = 0.0;
  for (std::size_t k = 0; k < ab.size(); ++k) {
    if (ab[k]->size() != bb[k]->size()) {
      throw ArgumentError("parameter shapes differ");
    }
    for (Eigen::Index i = 0; i < ab[k]->size(); ++i) {
      const double x = ab[k]->data()[i];
      const double y = bb[k]->data()[i];
      worst = std::max(worst,
                       std::abs(x - y) / std::max(std::abs(y), floor));
    }
  }
  return worst;
}

}  // namespace maskdiff
