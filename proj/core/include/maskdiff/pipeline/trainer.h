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

#ifndef MASKDIFF_PIPELINE_TRAINER_H_
#define MASKDIFF_PIPELINE_TRAINER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "maskdiff/core/schedule.h"
#include "maskdiff/denoiser/loss.h"
#include "maskdiff/denoiser/optimizer.h"
#include "maskdiff/denoiser/params.h"
#include "maskdiff/pipeline/metrics_io.h"
#include "maskdiff/pipeline/poison.h"

namespace maskdiff {

enum class TrainMode { kClean, kShadowMask, kDataPoison };

TrainMode parse_train_mode(const std::string& name);
std::string train_mode_name(TrainMode mode);

struct TrainConfig {
  TrainMode mode = TrainMode::kShadowMask;
  // Trigger share of the terminal prior on flagged sequences (ShadowMask).
  double rho = 1.0;
  // Terminal prior share used on unflagged sequences; 0 is the standard
  // masked process, 1 the strict clean fine-tuning probe.
  double clean_rho = 0.0;
  int steps = 5000;
  int batch_size = 64;
  OptimizerConfig optimizer;
  std::uint64_t seed = 0;
  std::string freeze = "all";
  int eval_every = 500;
  // Draw batch times with stratified_times instead of independently.
  bool stratified_time = false;
  // Cosine step-size decay over the run's steps.
  bool lr_decay = false;
  DenoiserConfig model;

  // Throws ArgumentError on invalid values.
  void validate() const;
  // Trigger share applied to a sequence with the given poison flag.
  double rho_for(bool flagged) const;
};

// Snapshot measurements attached to a metric record.
struct EvalSnapshot {
  std::optional<double> asr;
  std::optional<double> fpr;
  std::optional<double> val_nelbo;
};
using Evaluator =
    std::function<EvalSnapshot(const DenoiserParams& params, int step)>;

// One drawn training sequence, reported to an optional observer.
struct DrawTrace {
  int step;
  int index;
  bool flagged;
  double rho;
  const TrainingExample* example;
};

struct TrainHooks {
  Evaluator evaluator;
  std::function<void(const DrawTrace&)> observer;
  // Written when training diverges.
  std::string diagnostic_checkpoint;
};

struct TrainResult {
  DenoiserParams params;
  std::vector<MetricRecord> metrics;
};

// Algorithm: for each step, draw batch_size training indices uniformly with
// replacement; corrupt each sequence with the mixture prior (rho_for(flag)),
// indicate terminal positions, and take an optimizer step on the batch loss.
// A metric record is emitted every eval_every steps and at the last step,
// with the mean training loss since the previous record. Starts from
// `initial` when given, otherwise from DenoiserParams::Init(model, seed).
// Throws TrainingDiverged (after writing the diagnostic checkpoint, if
// configured) when the loss or parameters become non-finite.
TrainResult train(const PoisonedCorpus& data, const TrainConfig& config,
                  const NoiseSchedule& schedule, const TrainHooks& hooks = {},
                  const DenoiserParams* initial = nullptr);

// Continues training a (backdoored) model on clean data only. The returned
// metrics carry the evaluator's measurements at every eval_every steps and
// at step 0, forming the decay curve.
TrainResult clean_finetune(const DenoiserParams& params, const Corpus& clean,
                           const TrainConfig& config,
                           const NoiseSchedule& schedule,
                           const TrainHooks& hooks = {});

// Seed used to initialize parameters for a training seed.
std::uint64_t init_seed(std::uint64_t seed);

}  // namespace maskdiff

#endif  // MASKDIFF_PIPELINE_TRAINER_H_
