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

#ifndef MASKDIFF_PIPELINE_CONFIG_H_
#define MASKDIFF_PIPELINE_CONFIG_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "maskdiff/core/schedule.h"
#include "maskdiff/pipeline/corpus.h"
#include "maskdiff/pipeline/poison.h"
#include "maskdiff/pipeline/trainer.h"

namespace maskdiff {

// Every knob of an end-to-end run. Serialized as flat key=value text; the
// keys are listed by experiment_keys().
struct ExperimentConfig {
  std::uint64_t seed = 0;
  int clean_size = 32;
  int half = 7;
  GeneratorSpec generator;

  double poison_rate = 0.01;
  // "auto" or comma-separated token ids.
  std::string target = "auto";
  Placement placement = Placement::kPrepend;

  TrainConfig train;

  int sample_steps = 512;
  int num_samples = 512;
  // Steps of the time grid used for the validation NELBO.
  int val_steps = 128;
  // Validation sequences scored for the NELBO; 0 means all.
  int val_sequences = 200;
  // Chains per side for the ASR/FPR attached to each training record;
  // 0 records the loss only.
  int track_samples = 0;
  double drop_rate = 0.0;
  int finetune_steps = 0;
  double finetune_rho = 0.0;

  double t_min = NoiseSchedule::kDefaultTMin;
  double t_max = NoiseSchedule::kDefaultTMax;

  VocabSpec vocab() const { return VocabSpec(clean_size); }
  Layout layout() const { return Layout{half}; }
  NoiseSchedule schedule() const { return NoiseSchedule::Linear(t_min, t_max); }
  // Copies clean_size/half into the model config and validates everything.
  void finalize();
};

std::vector<std::string> experiment_keys();

// Sets one key. Throws ArgumentError for an unknown key or a bad value.
void apply_setting(ExperimentConfig& config, const std::string& key,
                   const std::string& value);
std::string get_setting(const ExperimentConfig& config, const std::string& key);

// Lines are "key=value"; blank lines and lines starting with '#' are
// skipped. Throws FormatError (with line number) on malformed lines; keys
// are not checked.
std::vector<std::pair<std::string, std::string>> parse_key_values(
    const std::string& text);
// Throws ArgumentError on unknown keys.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);
// All keys in experiment_keys() order; parse_experiment_config inverts it.
std::string format_experiment_config(const ExperimentConfig& config);

// Parses "auto" via choose_target, otherwise comma-separated ids.
TokenSequence resolve_target(const std::string& spec, const Corpus& corpus);

}  // namespace maskdiff

#endif  // MASKDIFF_PIPELINE_CONFIG_H_
