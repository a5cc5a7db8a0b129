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

#include "maskdiff/pipeline/trainer.h"

#include <cmath>
#include <limits>

#include "maskdiff/core/errors.h"
#include "maskdiff/core/random.h"
#include "maskdiff/denoiser/checkpoint.h"
#include "maskdiff/denoiser/loss.h"
#include "maskdiff/diffusion/prior.h"
#include "maskdiff/objective/objective.h"

namespace maskdiff {
namespace {

constexpr std::uint64_t kInitStream = 0x696e6974ULL;

struct LoopSpec {
  std::string mode_name;
  bool record_initial = false;
};

TrainResult run_loop(const std::vector<TokenSequence>& train_set,
                     const std::vector<bool>& flags, const TrainConfig& config,
                     const NoiseSchedule& schedule, const TrainHooks& hooks,
                     DenoiserParams params, const LoopSpec& loop) {
  config.validate();
  if (train_set.empty()) throw ArgumentError("training split is empty");
  if (flags.size() != train_set.size()) {
    throw ArgumentError("one poison flag per training sequence required");
  }
  const VocabSpec vocab = config.model.vocab();
  const FreezeMask mask =
      FreezeMask::Parse(config.freeze, static_cast<int>(params.layers.size()));
  OptimizerConfig optimizer_config = config.optimizer;
  if (config.lr_decay) optimizer_config.decay_steps = config.steps;
  Optimizer optimizer(optimizer_config, params);
  const MixturePrior flagged_prior(vocab, config.rho_for(true));
  const MixturePrior clean_prior(vocab, config.rho_for(false));

  TrainResult result;
  auto record = [&](int step, double loss) {
    MetricRecord r;
    r.step = step;
    r.mode = loop.mode_name;
    r.loss = loss;
    if (hooks.evaluator) {
      const EvalSnapshot snap = hooks.evaluator(params, step);
      r.asr = snap.asr;
      r.fpr = snap.fpr;
      r.val_nelbo = snap.val_nelbo;
    }
    result.metrics.push_back(r);
  };
  if (loop.record_initial) {
    record(0, std::numeric_limits<double>::quiet_NaN());
  }

  Rng rng(config.seed);
  std::vector<TrainingExample> batch(config.batch_size);
  std::vector<int> indices(config.batch_size);
  double loss_sum = 0.0;
  int loss_count = 0;
  for (int step = 1; step <= config.steps; ++step) {
    std::vector<double> times;
    if (config.stratified_time) {
      times = stratified_times(schedule, config.batch_size, rng);
    }
    for (int b = 0; b < config.batch_size; ++b) {
      const int idx = static_cast<int>(rng.index(train_set.size()));
      indices[b] = idx;
      const bool flagged = flags[idx];
      const MixturePrior& prior = flagged ? flagged_prior : clean_prior;
      batch[b] = times.empty()
                     ? draw_example(train_set[idx], prior, schedule, rng)
                     : draw_example_at(train_set[idx], prior, schedule,
                                       times[b], rng);
      if (hooks.observer) {
        hooks.observer(DrawTrace{step, idx, flagged, prior.rho(), &batch[b]});
      }
    }
    LossAndGrad lg = loss_and_grad(params, batch);
    if (!std::isfinite(lg.loss) || !lg.grad.all_finite()) {
      if (!hooks.diagnostic_checkpoint.empty()) {
        save_checkpoint(hooks.diagnostic_checkpoint, params);
      }
      throw TrainingDiverged("non-finite loss at step " + std::to_string(step));
    }
    optimizer.step(params, lg.grad, mask);
    if (!params.all_finite()) {
      if (!hooks.diagnostic_checkpoint.empty()) {
        save_checkpoint(hooks.diagnostic_checkpoint, params);
      }
      throw TrainingDiverged("non-finite parameters after step " +
                             std::to_string(step));
    }
    loss_sum += lg.loss;
    ++loss_count;
    const bool due = config.eval_every > 0 && step % config.eval_every == 0;
    if (due || step == config.steps) {
      record(step, loss_sum / loss_count);
      loss_sum = 0.0;
      loss_count = 0;
    }
  }
  result.params = std::move(params);
  return result;
}

}  // namespace

TrainMode parse_train_mode(const std::string& name) {
  if (name == "clean") return TrainMode::kClean;
  if (name == "shadowmask") return TrainMode::kShadowMask;
  if (name == "data_poison") return TrainMode::kDataPoison;
  throw ArgumentError("unknown mode '" + name +
                      "' (clean|shadowmask|data_poison)");
}

std::string train_mode_name(TrainMode mode) {
  switch (mode) {
    case TrainMode::kClean:
      return "clean";
    case TrainMode::kShadowMask:
      return "shadowmask";
    case TrainMode::kDataPoison:
      return "data_poison";
  }
  return "unknown";
}

void TrainConfig::validate() const {
  model.validate();
  if (!(rho >= 0.0 && rho <= 1.0)) throw ArgumentError("rho must lie in [0, 1]");
  if (!(clean_rho >= 0.0 && clean_rho <= 1.0)) {
    throw ArgumentError("clean_rho must lie in [0, 1]");
  }
  if (mode == TrainMode::kShadowMask && rho <= 0.0) {
    throw ArgumentError("shadowmask mode needs rho > 0");
  }
  if (steps < 0) throw ArgumentError("steps must be >= 0");
  if (batch_size < 1) throw ArgumentError("batch_size must be >= 1");
  if (eval_every < 0) throw ArgumentError("eval_every must be >= 0");
  if (!(optimizer.learning_rate > 0.0) || !std::isfinite(optimizer.learning_rate)) {
    throw ArgumentError("learning_rate must be positive");
  }
  if (!(optimizer.momentum >= 0.0 && optimizer.momentum < 1.0)) {
    throw ArgumentError("momentum must lie in [0, 1)");
  }
  if (!(optimizer.clip_norm >= 0.0)) throw ArgumentError("clip must be >= 0");
}

double TrainConfig::rho_for(bool flagged) const {
  if (flagged && mode == TrainMode::kShadowMask) return rho;
  return clean_rho;
}

std::uint64_t init_seed(std::uint64_t seed) {
  return derive_seed(seed, kInitStream);
}

TrainResult train(const PoisonedCorpus& data, const TrainConfig& config,
                  const NoiseSchedule& schedule, const TrainHooks& hooks,
                  const DenoiserParams* initial) {
  if (data.corpus.vocab != config.model.vocab() ||
      data.corpus.layout.seq_len() != config.model.seq_len) {
    throw ArgumentError("corpus shape does not match the model config");
  }
  DenoiserParams params = initial != nullptr
                              ? *initial
                              : DenoiserParams::Init(config.model,
                                                     init_seed(config.seed));
  if (!(params.config == config.model)) {
    throw ArgumentError("initial parameters do not match the model config");
  }
  return run_loop(data.corpus.train, data.flags, config, schedule, hooks,
                  std::move(params), {train_mode_name(config.mode), false});
}

TrainResult clean_finetune(const DenoiserParams& params, const Corpus& clean,
                           const TrainConfig& config,
                           const NoiseSchedule& schedule,
                           const TrainHooks& hooks) {
  if (!(params.config == config.model)) {
    throw ArgumentError("parameters do not match the model config");
  }
  if (clean.vocab != config.model.vocab() ||
      clean.layout.seq_len() != config.model.seq_len) {
    throw ArgumentError("corpus shape does not match the model config");
  }
  TrainConfig ft = config;
  ft.mode = TrainMode::kClean;
  const std::vector<bool> flags(clean.train.size(), false);
  return run_loop(clean.train, flags, ft, schedule, hooks, params,
                  {"clean_finetune", true});
}

}  // namespace maskdiff
