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

#include "maskdiff/pipeline/experiment.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "maskdiff/core/errors.h"
#include "maskdiff/core/random.h"
#include "maskdiff/denoiser/checkpoint.h"
#include "maskdiff/denoiser/network.h"
#include "maskdiff/eval/metrics.h"
#include "maskdiff/pipeline/metrics_io.h"
#include "maskdiff/sampler/sampler.h"

namespace maskdiff {
namespace {

constexpr std::uint64_t kPoisonStream = 0x706f69736f6e;
constexpr std::uint64_t kTrainStream = 0x747261696e;
constexpr std::uint64_t kEvalStream = 0x6576616c;
constexpr std::uint64_t kDropoutStream = 0x64726f70;

constexpr char kArtifactPrefix[] = "artifact.";

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::string optional_real(const std::optional<double>& value) {
  return value ? format_real(*value) : "NA";
}

TokenSequence read_target(const RunPaths& paths) {
  std::string text = read_text(paths.target());
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
    text.pop_back();
  }
  TokenSequence target;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      target.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw FormatError(paths.target() + ":1: bad token '" + item + "'");
    }
  }
  if (target.empty()) throw FormatError(paths.target() + ":1: empty target");
  return target;
}

std::string join_tokens(const TokenSequence& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(tokens[i]);
  }
  return out;
}

std::string model_checkpoint(const ExperimentConfig& config,
                             const RunPaths& paths) {
  return config.finetune_steps > 0 ? paths.finetuned_checkpoint()
                                   : paths.checkpoint();
}

TrainConfig seeded(const ExperimentConfig& config) {
  TrainConfig train = config.train;
  train.seed = train_seed(config.seed);
  return train;
}

std::vector<TokenSequence> validation_subset(const ExperimentConfig& config,
                                             const Corpus& corpus) {
  std::size_t n = corpus.validation.size();
  if (config.val_sequences > 0) {
    n = std::min(n, static_cast<std::size_t>(config.val_sequences));
  }
  return {corpus.validation.begin(), corpus.validation.begin() + n};
}

// Evaluator attached to training records when track_samples > 0.
Evaluator tracking_evaluator(const ExperimentConfig& config,
                             const AttackProtocol& protocol, int samples,
                             const std::vector<TokenSequence>* validation) {
  if (samples <= 0) return nullptr;
  AttackProtocol tracked = protocol;
  tracked.num_samples = samples;
  const NoiseSchedule schedule = config.schedule();
  const int val_steps = config.val_steps;
  return [tracked, schedule, val_steps, validation](const DenoiserParams& p,
                                                     int) {
    const NetworkDenoiser denoiser(p);
    UtilityProbe probe;
    if (validation != nullptr) probe.validation = *validation;
    probe.grid = TimeGrid::Uniform(val_steps);
    const MetricReport r = evaluate_attack(denoiser, tracked, schedule, probe);
    EvalSnapshot snapshot;
    snapshot.asr = r.asr;
    snapshot.fpr = r.fpr;
    snapshot.val_nelbo = r.val_nelbo_per_token;
    return snapshot;
  };
}

void write_metrics(const std::string& path,
                   const std::vector<MetricRecord>& records) {
  write_text(path, "");
  append_metrics(path, records);
}

std::string rate_label(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", rate);
  return buf;
}

}  // namespace

TokenSequence load_target(const RunPaths& paths) { return read_target(paths); }

std::uint64_t poison_seed(std::uint64_t seed) {
  return derive_seed(seed, kPoisonStream);
}
std::uint64_t train_seed(std::uint64_t seed) {
  return derive_seed(seed, kTrainStream);
}
std::uint64_t eval_seed(std::uint64_t seed) {
  return derive_seed(seed, kEvalStream);
}

std::string format_manifest(const RunManifest& manifest) {
  std::ostringstream out;
  out << "# maskdiff run manifest\n";
  out << "command=" << manifest.command << '\n';
  out << "version=" << manifest.version << '\n';
  out << "out=" << manifest.out_dir << '\n';
  for (const auto& [name, path] : manifest.artifacts) {
    out << kArtifactPrefix << name << '=' << path << '\n';
  }
  out << format_experiment_config(manifest.config);
  return out.str();
}

RunManifest parse_manifest(const std::string& text) {
  RunManifest manifest;
  manifest.version.clear();
  const std::string prefix = kArtifactPrefix;
  for (const auto& [key, value] : parse_key_values(text)) {
    if (key == "command") {
      manifest.command = value;
    } else if (key == "version") {
      manifest.version = value;
    } else if (key == "out") {
      manifest.out_dir = value;
    } else if (key.rfind(prefix, 0) == 0) {
      manifest.artifacts.emplace_back(key.substr(prefix.size()), value);
    } else {
      apply_setting(manifest.config, key, value);
    }
  }
  if (manifest.command.empty()) throw FormatError("manifest has no command");
  if (manifest.out_dir.empty()) throw FormatError("manifest has no out");
  manifest.config.finalize();
  return manifest;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  write_text(path, format_manifest(manifest));
}

RunManifest read_manifest(const std::string& path) {
  return parse_manifest(read_text(path));
}

std::vector<std::string> run_commands() {
  return {"gen", "poison", "train", "finetune", "sample", "eval", "pipeline",
          "run-all"};
}

std::vector<std::pair<std::string, std::string>> command_artifacts(
    const std::string& command, const ExperimentConfig& config,
    const RunPaths& p) {
  const bool finetuned = config.finetune_steps > 0;
  const std::pair<std::string, std::string> model =
      finetuned ? std::pair<std::string, std::string>{"finetuned",
                                                      p.finetuned_checkpoint()}
                : std::pair<std::string, std::string>{"checkpoint",
                                                      p.checkpoint()};
  if (command == "gen") return {{"corpus", p.corpus_dir()}};
  if (command == "poison") {
    return {{"corpus", p.corpus_dir()},
            {"poisoned", p.poisoned_dir()},
            {"target", p.target()}};
  }
  if (command == "train") {
    return {{"poisoned", p.poisoned_dir()},
            {"target", p.target()},
            {"checkpoint", p.checkpoint()},
            {"metrics", p.train_metrics()}};
  }
  if (command == "finetune") {
    return {{"checkpoint", p.checkpoint()},
            {"corpus", p.corpus_dir()},
            {"target", p.target()},
            {"finetuned", p.finetuned_checkpoint()},
            {"metrics", p.finetune_metrics()}};
  }
  if (command == "sample") {
    return {model,
            {"target", p.target()},
            {"samples_backdoor", p.backdoor_samples()},
            {"samples_clean", p.clean_samples()}};
  }
  if (command == "eval") {
    return {model,
            {"corpus", p.corpus_dir()},
            {"target", p.target()},
            {"metrics", p.eval_report()}};
  }
  if (command == "pipeline") {
    std::vector<std::pair<std::string, std::string>> all = {
        {"corpus", p.corpus_dir()},
        {"poisoned", p.poisoned_dir()},
        {"target", p.target()},
        {"checkpoint", p.checkpoint()},
        {"train_metrics", p.train_metrics()}};
    if (finetuned) {
      all.emplace_back("finetuned", p.finetuned_checkpoint());
      all.emplace_back("finetune_metrics", p.finetune_metrics());
    }
    all.emplace_back("metrics", p.eval_report());
    return all;
  }
  if (command == "run-all") return {{"comparison", p.comparison()}};
  throw ArgumentError("unknown command '" + command + "'");
}

RunManifest make_manifest(const std::string& command,
                          const ExperimentConfig& config,
                          const RunPaths& paths) {
  RunManifest manifest;
  manifest.command = command;
  manifest.out_dir = paths.dir;
  manifest.config = config;
  manifest.artifacts = command_artifacts(command, config, paths);
  return manifest;
}

Corpus run_gen(const ExperimentConfig& config, const RunPaths& paths) {
  Corpus corpus = generate_toy_corpus(config.vocab(), config.layout(),
                                      config.generator, config.seed);
  ensure_dir(paths.corpus_dir());
  write_corpus(paths.corpus_dir(), corpus);
  return corpus;
}

PoisonedCorpus run_poison(const ExperimentConfig& config,
                          const RunPaths& paths) {
  const Corpus corpus = read_corpus(paths.corpus_dir());
  PoisonSpec spec;
  // ShadowMask plants the trigger state itself; the data-poisoning baseline
  // can only write a visible token.
  spec.trigger_token = config.train.mode == TrainMode::kShadowMask
                           ? corpus.vocab.trigger_id()
                           : TokenRoles(corpus.vocab).trigger_word;
  spec.target = resolve_target(config.target, corpus);
  spec.rate = config.train.mode == TrainMode::kClean ? 0.0 : config.poison_rate;
  spec.placement = config.placement;
  PoisonedCorpus poisoned = poison_corpus(corpus, spec, poison_seed(config.seed));
  ensure_dir(paths.poisoned_dir());
  write_poisoned_corpus(paths.poisoned_dir(), poisoned);
  write_text(paths.target(), join_tokens(spec.target) + "\n");
  return poisoned;
}

AttackProtocol protocol_for(const ExperimentConfig& config,
                            const TokenSequence& target) {
  AttackProtocol protocol =
      AttackProtocol::For(config.train.mode, config.vocab(), config.layout(),
                          target, config.train.rho);
  protocol.steps = config.sample_steps;
  protocol.num_samples = config.num_samples;
  protocol.seed = eval_seed(config.seed);
  return protocol;
}

TrainResult run_train(const ExperimentConfig& config, const RunPaths& paths) {
  const PoisonedCorpus data = read_poisoned_corpus(paths.poisoned_dir());
  TrainHooks hooks;
  hooks.diagnostic_checkpoint = paths.dir + "/diverged.ckpt";
  const std::vector<TokenSequence> validation =
      validation_subset(config, data.corpus);
  if (config.track_samples > 0) {
    hooks.evaluator = tracking_evaluator(
        config, protocol_for(config, read_target(paths)),
        config.track_samples, &validation);
  }
  TrainResult result = train(data, seeded(config), config.schedule(), hooks);
  save_checkpoint(paths.checkpoint(), result.params);
  write_metrics(paths.train_metrics(), result.metrics);
  return result;
}

TrainResult run_finetune(const ExperimentConfig& config,
                         const RunPaths& paths) {
  if (config.finetune_steps <= 0) {
    throw ArgumentError("finetune requires finetune_steps > 0");
  }
  const DenoiserParams params = load_checkpoint(paths.checkpoint());
  const Corpus corpus = read_corpus(paths.corpus_dir());
  TrainConfig train = seeded(config);
  train.seed = derive_seed(train.seed, 1);
  train.steps = config.finetune_steps;
  train.clean_rho = config.finetune_rho;
  train.model = params.config;
  const std::vector<TokenSequence> validation =
      validation_subset(config, corpus);
  TrainHooks hooks;
  hooks.diagnostic_checkpoint = paths.dir + "/diverged.ckpt";
  hooks.evaluator =
      tracking_evaluator(config, protocol_for(config, read_target(paths)),
                         config.track_samples > 0 ? config.track_samples
                                                  : config.num_samples,
                         &validation);
  TrainResult result =
      clean_finetune(params, corpus, train, config.schedule(), hooks);
  save_checkpoint(paths.finetuned_checkpoint(), result.params);
  write_metrics(paths.finetune_metrics(), result.metrics);
  return result;
}

SampleSets run_sample(const ExperimentConfig& config, const RunPaths& paths) {
  const DenoiserParams params = load_checkpoint(model_checkpoint(config, paths));
  const NetworkDenoiser denoiser(params);
  const AttackProtocol protocol = protocol_for(config, read_target(paths));
  const NoiseSchedule schedule = config.schedule();
  const MixturePrior prior = protocol.kernel_prior(config.vocab());
  SampleSets sets;
  const SampleRequest backdoor = protocol.backdoor_request();
  const SampleRequest clean = protocol.clean_request();
  for (const SampleResult& r : sample_batch(denoiser, backdoor,
                                            protocol.num_samples, prior,
                                            schedule)) {
    sets.backdoor.push_back(r.tokens);
  }
  for (const SampleResult& r :
       sample_batch(denoiser, clean, protocol.num_samples, prior, schedule)) {
    sets.clean.push_back(r.tokens);
  }
  write_samples(paths.backdoor_samples(), backdoor, sets.backdoor);
  write_samples(paths.clean_samples(), clean, sets.clean);
  return sets;
}

EvalSummary run_eval(const ExperimentConfig& config, const RunPaths& paths) {
  const DenoiserParams params = load_checkpoint(model_checkpoint(config, paths));
  const NetworkDenoiser denoiser(params);
  const Corpus corpus = read_corpus(paths.corpus_dir());
  const AttackProtocol protocol = protocol_for(config, read_target(paths));
  const NoiseSchedule schedule = config.schedule();
  const NgramScorer scorer =
      NgramScorer::Fit(corpus.heldout, corpus.vocab, corpus.layout);
  const std::vector<TokenSequence> validation =
      validation_subset(config, corpus);
  UtilityProbe probe;
  probe.validation = validation;
  probe.grid = TimeGrid::Uniform(config.val_steps);
  probe.scorer = &scorer;
  EvalSummary summary;
  summary.report = evaluate_attack(denoiser, protocol, schedule, probe);
  if (config.drop_rate > 0.0) {
    summary.dropout = dropout_defense(
        denoiser, protocol, corpus.validation, config.drop_rate, schedule,
        &scorer, derive_seed(eval_seed(config.seed), kDropoutStream));
  }
  write_text(paths.eval_report(), format_eval_report(summary));
  return summary;
}

EvalSummary run_pipeline(const ExperimentConfig& config,
                         const RunPaths& paths) {
  run_gen(config, paths);
  run_poison(config, paths);
  run_train(config, paths);
  if (config.finetune_steps > 0) run_finetune(config, paths);
  return run_eval(config, paths);
}

void run_command(const std::string& command, const ExperimentConfig& config,
                 const RunPaths& paths) {
  ensure_dir(paths.dir);
  if (command == "gen") {
    run_gen(config, paths);
  } else if (command == "poison") {
    run_poison(config, paths);
  } else if (command == "train") {
    run_train(config, paths);
  } else if (command == "finetune") {
    run_finetune(config, paths);
  } else if (command == "sample") {
    run_sample(config, paths);
  } else if (command == "eval") {
    run_eval(config, paths);
  } else if (command == "pipeline") {
    run_pipeline(config, paths);
  } else if (command == "run-all") {
    run_all(config, paths);
  } else {
    throw ArgumentError("unknown command '" + command + "'");
  }
}

std::vector<ComparisonRow> run_all(const ExperimentConfig& config,
                                   const RunPaths& paths) {
  std::vector<ComparisonRow> rows;
  auto run_one = [&](TrainMode mode, double rate, const std::string& name) {
    ExperimentConfig c = config;
    c.train.mode = mode;
    c.poison_rate = rate;
    c.finalize();
    const RunPaths sub{paths.dir + "/" + name};
    ensure_dir(sub.dir);
    write_manifest(sub.manifest("pipeline"), make_manifest("pipeline", c, sub));
    ComparisonRow row;
    row.mode = train_mode_name(mode);
    row.poison_rate = mode == TrainMode::kClean ? 0.0 : rate;
    row.summary = run_pipeline(c, sub);
    row.dir = sub.dir;
    rows.push_back(std::move(row));
  };
  ensure_dir(paths.dir);
  run_one(TrainMode::kClean, 0.0, "clean");
  for (TrainMode mode : {TrainMode::kShadowMask, TrainMode::kDataPoison}) {
    for (double rate : sweep_rates()) {
      run_one(mode, rate, train_mode_name(mode) + "_p" + rate_label(rate));
    }
  }
  write_text(paths.comparison(), format_comparison(rows));
  return rows;
}

std::string format_comparison(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %-8s %-8s %-8s %-10s %-10s\n",
                "mode", "rate", "asr", "fpr", "val_nelbo", "gen_score");
  out << line;
  auto cell = [](const std::optional<double>& v) {
    char buf[32];
    if (v) {
      std::snprintf(buf, sizeof(buf), "%.4f", *v);
    } else {
      std::snprintf(buf, sizeof(buf), "NA");
    }
    return std::string(buf);
  };
  for (const ComparisonRow& row : rows) {
    const MetricReport& r = row.summary.report;
    std::snprintf(line, sizeof(line), "%-12s %-8s %-8.4f %-8.4f %-10s %-10s\n",
                  row.mode.c_str(), rate_label(row.poison_rate).c_str(), r.asr,
                  r.fpr, cell(r.val_nelbo_per_token).c_str(),
                  cell(r.gen_score).c_str());
    out << line;
  }
  // ASR gap between the two attacks at every rate both were run at.
  for (const ComparisonRow& sm : rows) {
    if (sm.mode != "shadowmask") continue;
    for (const ComparisonRow& dp : rows) {
      if (dp.mode != "data_poison" || dp.poison_rate != sm.poison_rate) continue;
      std::snprintf(line, sizeof(line), "asr_gap rate=%s %+.4f\n",
                    rate_label(sm.poison_rate).c_str(),
                    sm.summary.report.asr - dp.summary.report.asr);
      out << line;
    }
  }
  return out.str();
}

std::string format_eval_report(const EvalSummary& summary) {
  std::ostringstream out;
  const MetricReport& r = summary.report;
  out << "asr=" << format_real(r.asr) << '\n';
  out << "fpr=" << format_real(r.fpr) << '\n';
  out << "val_nelbo=" << optional_real(r.val_nelbo_per_token) << '\n';
  out << "gen_score=" << optional_real(r.gen_score) << '\n';
  out << "num_samples=" << r.num_samples << '\n';
  out << "backdoor_fallbacks=" << r.diagnostics.backdoor_fallbacks << '\n';
  out << "clean_fallbacks=" << r.diagnostics.clean_fallbacks << '\n';
  out << "denoiser_calls=" << r.diagnostics.denoiser_calls << '\n';
  if (summary.dropout) {
    const MetricReport& d = *summary.dropout;
    out << "dropout_asr=" << format_real(d.asr) << '\n';
    out << "dropout_fpr=" << format_real(d.fpr) << '\n';
    out << "dropout_gen_score=" << optional_real(d.gen_score) << '\n';
    out << "triggers_dropped=" << d.diagnostics.triggers_dropped << '\n';
  }
  return out.str();
}

}  // namespace maskdiff
