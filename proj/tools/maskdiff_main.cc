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

// maskdiff: corpus generation, poisoning, training, sampling, evaluation and
// verification from one flat config.
//
// Exit codes: 0 success, 1 verification or assertion failure, 2 usage or
// config error, 3 I/O or data format error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maskdiff/core/errors.h"
#include "maskdiff/pipeline/config.h"
#include "maskdiff/pipeline/experiment.h"
#include "maskdiff/verify/checks.h"

namespace {

using maskdiff::ExperimentConfig;
using maskdiff::RunManifest;
using maskdiff::RunPaths;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

// Errors in user-provided configuration, reported with exit code 2 even
// when the underlying parser throws FormatError.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::string config_path;
  std::vector<std::string> settings;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<double> rho;
  std::optional<double> poison_rate;
  std::optional<int> steps;
  std::optional<int> sample_steps;
  std::optional<std::string> placement;
  std::optional<double> drop_rate;
  std::string out = "maskdiff_run";
};

void add_run_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "Flat key=value config file");
  cmd->add_option("--set", o.settings, "Extra key=value override (repeatable)");
  cmd->add_option("--seed", o.seed, "Experiment seed");
  cmd->add_option("--mode", o.mode, "clean, shadowmask or data_poison");
  cmd->add_option("--rho", o.rho, "Trigger share of the terminal prior");
  cmd->add_option("--poison-rate", o.poison_rate, "Fraction of poisoned sequences");
  cmd->add_option("--steps", o.steps, "Training steps");
  cmd->add_option("--sample-steps", o.sample_steps, "Reverse sampling steps");
  cmd->add_option("--placement", o.placement, "prepend or replace");
  cmd->add_option("--drop-rate", o.drop_rate, "Input token dropout rate");
  cmd->add_option("--out", o.out, "Run directory")->capture_default_str();
}

ExperimentConfig resolve_config(const Overrides& o) {
  try {
    ExperimentConfig config;
    if (!o.config_path.empty()) {
      config = maskdiff::load_experiment_config(o.config_path);
    }
    for (const std::string& kv : o.settings) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw UsageError("--set expects key=value, got '" + kv + "'");
      }
      maskdiff::apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (o.seed) config.seed = *o.seed;
    if (o.mode) maskdiff::apply_setting(config, "mode", *o.mode);
    if (o.rho) config.train.rho = *o.rho;
    if (o.poison_rate) config.poison_rate = *o.poison_rate;
    if (o.steps) config.train.steps = *o.steps;
    if (o.sample_steps) config.sample_steps = *o.sample_steps;
    if (o.placement) maskdiff::apply_setting(config, "placement", *o.placement);
    if (o.drop_rate) config.drop_rate = *o.drop_rate;
    config.finalize();
    return config;
  } catch (const maskdiff::FormatError& e) {
    throw UsageError(e.what());
  } catch (const maskdiff::ArgumentError& e) {
    throw UsageError(e.what());
  }
}

void print_file(const std::string& path) {
  std::ifstream in(path);
  if (in) std::cout << in.rdbuf();
}

void report(const std::string& command, const RunPaths& paths) {
  if (command == "eval" || command == "pipeline") {
    print_file(paths.eval_report());
  } else if (command == "run-all") {
    print_file(paths.comparison());
  } else if (command == "train") {
    print_file(paths.train_metrics());
  } else if (command == "finetune") {
    print_file(paths.finetune_metrics());
  }
}

// Writes the manifest, then runs the command.
void execute(const std::string& command, const ExperimentConfig& config,
             const RunPaths& paths) {
  std::error_code ec;
  std::filesystem::create_directories(paths.dir, ec);
  if (ec) throw maskdiff::IoError("cannot create directory " + paths.dir);
  const RunManifest manifest = maskdiff::make_manifest(command, config, paths);
  maskdiff::write_manifest(paths.manifest(command), manifest);
  std::cerr << "manifest " << paths.manifest(command) << '\n';
  maskdiff::run_command(command, config, paths);
  report(command, paths);
}

int run_verify(std::uint64_t seed) {
  maskdiff::VerifyOptions options;
  options.seed = seed;
  const std::vector<maskdiff::CheckResult> results =
      maskdiff::run_verification(options);
  std::cout << maskdiff::format_check_table(results);
  for (const maskdiff::CheckResult& r : results) {
    if (!r.passed) return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Masked-diffusion backdoor lab"};
  app.set_version_flag("--version", maskdiff::kToolVersion);
  app.require_subcommand(1);

  std::uint64_t verify_seed = 0;
  CLI::App* verify = app.add_subcommand("verify", "Run the equation checks");
  verify->add_option("--seed", verify_seed, "Seed of the random configurations");

  Overrides overrides;
  std::vector<std::pair<std::string, CLI::App*>> run_cmds;
  const std::vector<std::pair<std::string, std::string>> descriptions = {
      {"gen", "Generate the toy corpus"},
      {"poison", "Poison the training split"},
      {"train", "Train a denoiser"},
      {"finetune", "Clean fine-tuning of a trained denoiser"},
      {"sample", "Draw backdoor and clean samples"},
      {"eval", "Measure ASR, FPR and utility"},
      {"pipeline", "gen, poison, train, finetune and eval in one run"},
      {"run-all", "Clean baseline and both attacks at every poison rate"},
  };
  for (const auto& [name, text] : descriptions) {
    CLI::App* cmd = app.add_subcommand(name, text);
    add_run_options(cmd, overrides);
    run_cmds.emplace_back(name, cmd);
  }

  std::string manifest_path;
  std::string replay_out;
  CLI::App* replay = app.add_subcommand("replay", "Re-execute a run manifest");
  replay->add_option("--manifest", manifest_path, "Manifest file")->required();
  replay->add_option("--out", replay_out, "Run directory (default: manifest's)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (verify->parsed()) return run_verify(verify_seed);
    if (replay->parsed()) {
      RunManifest manifest;
      try {
        manifest = maskdiff::read_manifest(manifest_path);
      } catch (const maskdiff::FormatError& e) {
        throw UsageError(e.what());
      } catch (const maskdiff::ArgumentError& e) {
        throw UsageError(e.what());
      }
      const RunPaths paths{replay_out.empty() ? manifest.out_dir : replay_out};
      execute(manifest.command, manifest.config, paths);
      return kExitOk;
    }
    for (const auto& [name, cmd] : run_cmds) {
      if (cmd->parsed()) {
        execute(name, resolve_config(overrides), RunPaths{overrides.out});
        return kExitOk;
      }
    }
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const maskdiff::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const maskdiff::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const maskdiff::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kExitFailure;
  }
}
