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

#ifndef MASKDIFF_PIPELINE_EXPERIMENT_H_
#define MASKDIFF_PIPELINE_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maskdiff/denoiser/params.h"
#include "maskdiff/eval/harness.h"
#include "maskdiff/pipeline/config.h"
#include "maskdiff/pipeline/corpus.h"
#include "maskdiff/pipeline/poison.h"

namespace maskdiff {

inline constexpr char kToolVersion[] = "0.1.0";

// Fixed file names inside a run directory. Stages read their inputs from and
// write their outputs to the same directory, so a sequence of commands
// sharing --out forms one run.
struct RunPaths {
  std::string dir;

  std::string corpus_dir() const { return dir + "/corpus"; }
  std::string poisoned_dir() const { return dir + "/poisoned"; }
  std::string target() const { return dir + "/target.txt"; }
  std::string checkpoint() const { return dir + "/model.ckpt"; }
  std::string train_metrics() const { return dir + "/train_metrics.txt"; }
  std::string finetuned_checkpoint() const { return dir + "/finetuned.ckpt"; }
  std::string finetune_metrics() const { return dir + "/finetune_metrics.txt"; }
  std::string backdoor_samples() const { return dir + "/samples_backdoor.txt"; }
  std::string clean_samples() const { return dir + "/samples_clean.txt"; }
  std::string eval_report() const { return dir + "/eval.txt"; }
  std::string comparison() const { return dir + "/comparison.txt"; }
  std::string manifest(const std::string& command) const {
    return dir + "/manifest_" + command + ".txt";
  }
};

// Everything needed to re-execute one command.
struct RunManifest {
  std::string command;
  std::string version = kToolVersion;
  std::string out_dir;
  ExperimentConfig config;
  // (name, path) of every artifact the command reads or writes.
  std::vector<std::pair<std::string, std::string>> artifacts;
};

// Flat key=value text: command, version, out, one artifact.<name> line per
// artifact, then the full resolved config.
std::string format_manifest(const RunManifest& manifest);
RunManifest parse_manifest(const std::string& text);
void write_manifest(const std::string& path, const RunManifest& manifest);
RunManifest read_manifest(const std::string& path);

// Commands that operate on a run directory.
std::vector<std::string> run_commands();
// Artifacts (name, path) `command` reads or writes in a run directory; the
// fine-tuned checkpoint replaces the trained one when finetune_steps > 0.
// ArgumentError for an unknown command.
std::vector<std::pair<std::string, std::string>> command_artifacts(
    const std::string& command, const ExperimentConfig& config,
    const RunPaths& paths);
RunManifest make_manifest(const std::string& command,
                          const ExperimentConfig& config,
                          const RunPaths& paths);

// Seeds of the independent random streams of one experiment seed. The
// corpus uses the experiment seed itself so that every mode and rate sees
// the same data.
std::uint64_t poison_seed(std::uint64_t seed);
std::uint64_t train_seed(std::uint64_t seed);
std::uint64_t eval_seed(std::uint64_t seed);

// Writes corpus/.
Corpus run_gen(const ExperimentConfig& config, const RunPaths& paths);

// The comma-separated target written by run_poison.
TokenSequence load_target(const RunPaths& paths);

// Reads corpus/, writes poisoned/ and target.txt. The poison rate is forced
// to 0 in clean mode.
PoisonedCorpus run_poison(const ExperimentConfig& config, const RunPaths& paths);
// Reads poisoned/, writes model.ckpt and train_metrics.txt.
TrainResult run_train(const ExperimentConfig& config, const RunPaths& paths);
// Reads model.ckpt and corpus/, writes finetuned.ckpt and
// finetune_metrics.txt (ASR tracked at every record).
TrainResult run_finetune(const ExperimentConfig& config, const RunPaths& paths);

// Sample files for the backdoor and clean protocols.
struct SampleSets {
  std::vector<TokenSequence> backdoor;
  std::vector<TokenSequence> clean;
};
// Reads model.ckpt and target.txt, writes the two sample files.
SampleSets run_sample(const ExperimentConfig& config, const RunPaths& paths);

struct EvalSummary {
  MetricReport report;
  // Present when drop_rate > 0.
  std::optional<MetricReport> dropout;
};
// Reads model.ckpt, corpus/ and target.txt, writes eval.txt.
EvalSummary run_eval(const ExperimentConfig& config, const RunPaths& paths);

// gen, poison, train, (finetune when finetune_steps > 0) and eval in one
// directory.
EvalSummary run_pipeline(const ExperimentConfig& config, const RunPaths& paths);

// Dispatches a single command by name (gen, poison, train, finetune, sample,
// eval, pipeline).
void run_command(const std::string& command, const ExperimentConfig& config,
                 const RunPaths& paths);

// One row of the sweep comparison.
struct ComparisonRow {
  std::string mode;
  double poison_rate = 0.0;
  EvalSummary summary;
  std::string dir;
};

// The attack protocol an evaluation of `config` uses.
AttackProtocol protocol_for(const ExperimentConfig& config,
                            const TokenSequence& target);

inline const std::vector<double>& sweep_rates() {
  static const std::vector<double> rates = {0.001, 0.005, 0.01, 0.025};
  return rates;
}

// Clean baseline, then ShadowMask and data poisoning at every sweep rate,
// each a full pipeline in its own subdirectory with its own manifest.
// Writes comparison.txt and returns the rows in that order.
std::vector<ComparisonRow> run_all(const ExperimentConfig& config,
                                   const RunPaths& paths);
std::string format_comparison(const std::vector<ComparisonRow>& rows);

// Key=value evaluation report, reals printed round-trip exact.
std::string format_eval_report(const EvalSummary& summary);

}  // namespace maskdiff

#endif  // MASKDIFF_PIPELINE_EXPERIMENT_H_
