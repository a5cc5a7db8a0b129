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

// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.
//
//   maskdiff_acceptance [--config desk.cfg] [--work DIR] [--only 1,7,10]
//
// Criteria 7-10 train four desk-scale models (about 25 minutes on one core);
// their run directories and manifests stay under --work for inspection.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "maskdiff/core/errors.h"
#include "maskdiff/denoiser/checkpoint.h"
#include "maskdiff/denoiser/network.h"
#include "maskdiff/eval/harness.h"
#include "maskdiff/pipeline/config.h"
#include "maskdiff/pipeline/experiment.h"
#include "maskdiff/pipeline/trainer.h"
#include "maskdiff/verify/checks.h"

#ifndef MASKDIFF_DESK_CONFIG
#define MASKDIFF_DESK_CONFIG "configs/desk.cfg"
#endif
#ifndef MASKDIFF_ACCEPTANCE_WORK
#define MASKDIFF_ACCEPTANCE_WORK "acceptance_runs"
#endif

namespace maskdiff {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::string fmt(const char* format, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), format, a);
  return buf;
}

Outcome from_checks(const std::vector<CheckResult>& checks) {
  Outcome out{true, ""};
  for (const CheckResult& c : checks) {
    out.passed = out.passed && c.passed;
    if (!out.detail.empty()) out.detail += "; ";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s worst=%.3g bound=%.3g", c.name.c_str(),
                  c.worst, c.bound);
    out.detail += buf;
    if (!c.passed && !c.detail.empty()) out.detail += " (" + c.detail + ")";
  }
  return out;
}

// One trained desk model, kept for the criteria that share it.
struct DeskRun {
  ExperimentConfig config;
  RunPaths paths;
  EvalSummary summary;
  double seconds = 0.0;
};

DeskRun run_desk(const ExperimentConfig& base, TrainMode mode, double rate,
                 const std::string& dir) {
  DeskRun run{base, RunPaths{dir}, {}, 0.0};
  run.config.train.mode = mode;
  run.config.poison_rate = rate;
  run.config.finalize();
  fs::create_directories(dir);
  write_manifest(run.paths.manifest("pipeline"),
                 make_manifest("pipeline", run.config, run.paths));
  const auto start = std::chrono::steady_clock::now();
  run.summary = run_pipeline(run.config, run.paths);
  run.seconds = seconds_since(start);
  std::printf("  [%s] %.0fs asr=%.4f fpr=%.4f val_nelbo=%.4f manifest=%s\n",
              dir.c_str(), run.seconds, run.summary.report.asr,
              run.summary.report.fpr,
              run.summary.report.val_nelbo_per_token.value_or(NAN),
              run.paths.manifest("pipeline").c_str());
  std::fflush(stdout);
  return run;
}

std::string file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Relative path -> contents for a file or every file under a directory.
std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  if (fs::is_regular_file(root)) {
    files[""] = file_bytes(root);
    return files;
  }
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      files[fs::relative(entry.path(), root).string()] =
          file_bytes(entry.path());
    }
  }
  return files;
}

ExperimentConfig determinism_config(std::uint64_t seed) {
  ExperimentConfig c;
  c.seed = seed;
  c.generator.num_train = 400;
  c.generator.num_validation = 40;
  c.generator.num_heldout = 100;
  c.poison_rate = 0.05;
  c.train.steps = 60;
  c.train.batch_size = 16;
  c.train.eval_every = 20;
  c.finetune_steps = 20;
  c.track_samples = 8;
  c.sample_steps = 32;
  c.num_samples = 16;
  c.val_steps = 16;
  c.val_sequences = 10;
  c.drop_rate = 0.2;
  c.finalize();
  return c;
}

Outcome check_determinism(const std::string& work) {
  const std::string dir_a = work + "/determinism/original";
  const std::string dir_b = work + "/determinism/replay";
  fs::remove_all(work + "/determinism");
  fs::create_directories(dir_a);

  const RunManifest original =
      make_manifest("pipeline", determinism_config(11), RunPaths{dir_a});
  write_manifest(RunPaths{dir_a}.manifest("pipeline"), original);
  run_pipeline(original.config, RunPaths{dir_a});

  const RunManifest loaded = read_manifest(RunPaths{dir_a}.manifest("pipeline"));
  fs::create_directories(dir_b);
  run_pipeline(loaded.config, RunPaths{dir_b});
  const RunManifest replayed =
      make_manifest("pipeline", loaded.config, RunPaths{dir_b});

  Outcome out{true, ""};
  int compared = 0;
  for (std::size_t i = 0; i < original.artifacts.size(); ++i) {
    const auto& [name, path_a] = original.artifacts[i];
    const std::string& path_b = replayed.artifacts.at(i).second;
    if (!fs::exists(path_a) || !fs::exists(path_b)) {
      out.passed = false;
      out.detail += " missing:" + name;
      continue;
    }
    if (snapshot(path_a) != snapshot(path_b)) {
      out.passed = false;
      out.detail += " differs:" + name;
    }
    ++compared;
  }
  out.detail = std::to_string(compared) + " artifacts compared" +
               (out.detail.empty() ? ", all bit-identical" : out.detail);
  return out;
}

std::set<int> parse_only(const std::string& list) {
  std::set<int> ids;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) ids.insert(std::stoi(item));
  return ids;
}

int run(int argc, char** argv) {
  std::string config_path = MASKDIFF_DESK_CONFIG;
  std::string work = MASKDIFF_ACCEPTANCE_WORK;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (i + 1 >= argc) throw ArgumentError("missing value for " + arg);
    if (arg == "--config") {
      config_path = argv[++i];
    } else if (arg == "--work") {
      work = argv[++i];
    } else if (arg == "--only") {
      only = parse_only(argv[++i]);
    } else {
      throw ArgumentError("unknown argument " + arg);
    }
  }
  auto selected = [&](int id) { return only.empty() || only.count(id) > 0; };

  int failures = 0;
  auto report = [&](int id, const std::string& name, const Outcome& o) {
    std::printf("%s %2d %s: %s\n", o.passed ? "PASS" : "FAIL", id,
                name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.passed) ++failures;
  };
  auto guarded = [&](int id, const std::string& name,
                     const std::function<Outcome()>& body) {
    if (!selected(id)) return;
    try {
      report(id, name, body());
    } catch (const std::exception& e) {
      report(id, name, Outcome{false, std::string("exception: ") + e.what()});
    }
  };

  const VerifyOptions verify;
  guarded(1, "posterior exactness", [&] {
    const auto start = std::chrono::steady_clock::now();
    Outcome o = from_checks({check_posterior(verify)});
    const double secs = seconds_since(start);
    o.passed = o.passed && secs < 1.0;
    o.detail += fmt(" runtime=%.4fs (limit 1s)", secs);
    return o;
  });
  guarded(2, "mask-only recovery",
          [&] { return from_checks({check_mdlm_recovery(verify)}); });
  guarded(3, "generator consistency", [&] {
    return from_checks(
        {check_rate_matrix(verify), check_concrete_scores(verify)});
  });
  guarded(4, "objective equivalence",
          [&] { return from_checks({check_objective_mc(verify)}); });
  guarded(5, "gradient correctness",
          [&] { return from_checks({check_gradients(verify)}); });
  guarded(6, "prior term vanishing",
          [&] { return from_checks({check_prior_kl(verify)}); });

  const bool need_desk =
      selected(7) || selected(8) || selected(9) || selected(10);
  ExperimentConfig desk;
  if (need_desk) {
    desk = load_experiment_config(config_path);
    desk.train.rho = 1.0;
    desk.train.steps = 5000;
    desk.num_samples = 512;
    desk.finetune_steps = 0;
    desk.drop_rate = 0.0;
    desk.finalize();
    std::printf("  desk config %s: steps=%d batch=%d samples=%d\n",
                config_path.c_str(), desk.train.steps, desk.train.batch_size,
                desk.num_samples);
  }

  std::optional<DeskRun> shadow;
  auto shadow_run = [&]() -> const DeskRun& {
    if (!shadow) {
      shadow = run_desk(desk, TrainMode::kShadowMask, 0.01,
                        work + "/shadowmask_p0.01");
    }
    return *shadow;
  };

  guarded(7, "end-to-end backdoor", [&] {
    const DeskRun& r = shadow_run();
    const MetricReport& m = r.summary.report;
    Outcome o;
    o.passed = m.asr >= 0.95 && m.fpr == 0.0 && m.num_samples >= 512 &&
               r.seconds <= 900.0;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "asr=%.4f (>=0.95) fpr=%.4f (==0) samples=%d runtime=%.0fs "
                  "(<=900s)",
                  m.asr, m.fpr, m.num_samples, r.seconds);
    o.detail = buf;
    return o;
  });

  guarded(8, "utility preservation", [&] {
    const DeskRun& r = shadow_run();
    const DeskRun clean =
        run_desk(desk, TrainMode::kClean, 0.0, work + "/clean");
    const double backdoored = r.summary.report.val_nelbo_per_token.value();
    const double reference = clean.summary.report.val_nelbo_per_token.value();
    const double rel = std::abs(backdoored - reference) / reference;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "val_nelbo shadowmask=%.4f clean=%.4f relative gap=%.4f "
                  "(<=0.10)",
                  backdoored, reference, rel);
    return Outcome{rel <= 0.10, buf};
  });

  guarded(9, "baseline gap at lowest rate", [&] {
    const double rate = sweep_rates().front();
    const std::string suffix = fmt("_p%g", rate);
    std::vector<ComparisonRow> rows;
    for (TrainMode mode : {TrainMode::kShadowMask, TrainMode::kDataPoison}) {
      const std::string name = train_mode_name(mode);
      DeskRun r = run_desk(desk, mode, rate, work + "/" + name + suffix);
      rows.push_back({name, rate, r.summary, r.paths.dir});
    }
    const std::string table = format_comparison(rows);
    std::ofstream(work + "/comparison.txt") << table;
    const double gap = rows[0].summary.report.asr - rows[1].summary.report.asr;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "rate=%g shadowmask asr=%.4f data_poison asr=%.4f gap=%+.4f "
                  "(>=0.20), table %s/comparison.txt",
                  rate, rows[0].summary.report.asr,
                  rows[1].summary.report.asr, gap, work.c_str());
    return Outcome{gap >= 0.20, buf};
  });

  guarded(10, "sampling-budget invariance", [&] {
    const DeskRun& r = shadow_run();
    const DenoiserParams params = load_checkpoint(r.paths.checkpoint());
    const NetworkDenoiser denoiser(params);
    AttackProtocol protocol = protocol_for(r.config, load_target(r.paths));
    double lo = 1.0;
    double hi = 0.0;
    std::string values;
    for (int steps : {32, 64, 128, 256, 512}) {
      protocol.steps = steps;
      const double asr = measure_asr(denoiser, protocol, r.config.schedule());
      lo = std::min(lo, asr);
      hi = std::max(hi, asr);
      char buf[48];
      std::snprintf(buf, sizeof(buf), "%s%d:%.4f", values.empty() ? "" : " ",
                    steps, asr);
      values += buf;
    }
    return Outcome{hi - lo <= 0.02,
                   "asr by steps {" + values + "}" +
                       fmt(" spread=%.4f (<=0.02)", hi - lo)};
  });

  guarded(11, "determinism", [&] { return check_determinism(work); });

  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace maskdiff

int main(int argc, char** argv) {
  try {
    return maskdiff::run(argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
