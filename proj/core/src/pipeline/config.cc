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

#include "maskdiff/pipeline/config.h"

#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "maskdiff/core/errors.h"
#include "maskdiff/pipeline/metrics_io.h"

namespace maskdiff {
namespace {

int to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || x < std::numeric_limits<int>::min() ||
      x > std::numeric_limits<int>::max()) {
    throw ArgumentError(key + ": expected an integer, got '" + v + "'");
  }
  return static_cast<int>(x);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("");
    x = std::stoull(v, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw ArgumentError(key + ": expected an unsigned integer, got '" + v + "'");
  }
  return x;
}

double to_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw ArgumentError(key + ": expected a number, got '" + v + "'");
  }
  return x;
}

std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

std::vector<int> split_ints(const std::string& key, const std::string& v) {
  std::vector<int> xs;
  std::stringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) xs.push_back(to_int(key, item));
  if (xs.empty()) throw ArgumentError(key + ": expected a comma list");
  return xs;
}

struct Setting {
  const char* key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define MASKDIFF_INT(name, field)                                       \
  Setting {                                                             \
    name, [](ExperimentConfig& c, const std::string& v) {               \
      c.field = to_int(name, v);                                        \
    },                                                                  \
        [](const ExperimentConfig& c) { return std::to_string(c.field); } \
  }
#define MASKDIFF_REAL(name, field)                                      \
  Setting {                                                             \
    name, [](ExperimentConfig& c, const std::string& v) {               \
      c.field = to_real(name, v);                                       \
    },                                                                  \
        [](const ExperimentConfig& c) { return format_real(c.field); }  \
  }

const std::vector<Setting>& settings() {
  static const std::vector<Setting> table = {
      {"seed",
       [](ExperimentConfig& c, const std::string& v) {
         c.seed = to_u64("seed", v);
       },
       [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      MASKDIFF_INT("clean_size", clean_size),
      MASKDIFF_INT("half", half),
      MASKDIFF_INT("num_train", generator.num_train),
      MASKDIFF_INT("num_valid", generator.num_validation),
      MASKDIFF_INT("num_heldout", generator.num_heldout),
      MASKDIFF_INT("successors", generator.successors),
      MASKDIFF_REAL("poison_rate", poison_rate),
      {"target",
       [](ExperimentConfig& c, const std::string& v) {
         if (v != "auto") split_ints("target", v);
         c.target = v;
       },
       [](const ExperimentConfig& c) { return c.target; }},
      {"placement",
       [](ExperimentConfig& c, const std::string& v) {
         c.placement = parse_placement(v);
       },
       [](const ExperimentConfig& c) { return placement_name(c.placement); }},
      {"mode",
       [](ExperimentConfig& c, const std::string& v) {
         c.train.mode = parse_train_mode(v);
       },
       [](const ExperimentConfig& c) { return train_mode_name(c.train.mode); }},
      MASKDIFF_REAL("rho", train.rho),
      MASKDIFF_INT("steps", train.steps),
      MASKDIFF_INT("batch_size", train.batch_size),
      MASKDIFF_REAL("learning_rate", train.optimizer.learning_rate),
      MASKDIFF_REAL("momentum", train.optimizer.momentum),
      MASKDIFF_REAL("clip_norm", train.optimizer.clip_norm),
      {"optimizer",
       [](ExperimentConfig& c, const std::string& v) {
         c.train.optimizer.kind = parse_optimizer_kind(v);
       },
       [](const ExperimentConfig& c) {
         return optimizer_kind_name(c.train.optimizer.kind);
       }},
      MASKDIFF_REAL("beta2", train.optimizer.beta2),
      {"freeze",
       [](ExperimentConfig& c, const std::string& v) { c.train.freeze = v; },
       [](const ExperimentConfig& c) { return c.train.freeze; }},
      MASKDIFF_INT("eval_every", train.eval_every),
      {"stratified_time",
       [](ExperimentConfig& c, const std::string& v) {
         if (v != "0" && v != "1") {
           throw ArgumentError("stratified_time: expected 0 or 1");
         }
         c.train.stratified_time = v == "1";
       },
       [](const ExperimentConfig& c) {
         return std::string(c.train.stratified_time ? "1" : "0");
       }},
      {"lr_decay",
       [](ExperimentConfig& c, const std::string& v) {
         if (v != "0" && v != "1") {
           throw ArgumentError("lr_decay: expected 0 or 1");
         }
         c.train.lr_decay = v == "1";
       },
       [](const ExperimentConfig& c) {
         return std::string(c.train.lr_decay ? "1" : "0");
       }},
      MASKDIFF_INT("embed_dim", train.model.embed_dim),
      {"hidden_widths",
       [](ExperimentConfig& c, const std::string& v) {
         c.train.model.hidden_widths = split_ints("hidden_widths", v);
       },
       [](const ExperimentConfig& c) {
         return join_ints(c.train.model.hidden_widths);
       }},
      MASKDIFF_INT("sample_steps", sample_steps),
      MASKDIFF_INT("num_samples", num_samples),
      MASKDIFF_INT("val_steps", val_steps),
      MASKDIFF_INT("val_sequences", val_sequences),
      MASKDIFF_INT("track_samples", track_samples),
      MASKDIFF_REAL("drop_rate", drop_rate),
      MASKDIFF_INT("finetune_steps", finetune_steps),
      MASKDIFF_REAL("finetune_rho", finetune_rho),
      MASKDIFF_REAL("t_min", t_min),
      MASKDIFF_REAL("t_max", t_max),
  };
  return table;
}

#undef MASKDIFF_INT
#undef MASKDIFF_REAL

const Setting& find_setting(const std::string& key) {
  for (const Setting& s : settings()) {
    if (key == s.key) return s;
  }
  throw ArgumentError("unknown config key '" + key + "'");
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void ExperimentConfig::finalize() {
  train.model.clean_size = clean_size;
  train.model.seq_len = layout().seq_len();
  if (half < 1) throw ArgumentError("half must be >= 1");
  if (clean_size < 8) throw ArgumentError("clean_size must be >= 8");
  poison_count(poison_rate, 0);  // range check
  if (sample_steps < 1) throw ArgumentError("sample_steps must be >= 1");
  if (num_samples < 1) throw ArgumentError("num_samples must be >= 1");
  if (val_steps < 1) throw ArgumentError("val_steps must be >= 1");
  if (val_sequences < 0) throw ArgumentError("val_sequences must be >= 0");
  if (track_samples < 0) throw ArgumentError("track_samples must be >= 0");
  if (!(drop_rate >= 0.0 && drop_rate <= 1.0)) {
    throw ArgumentError("drop_rate must lie in [0, 1]");
  }
  if (finetune_steps < 0) throw ArgumentError("finetune_steps must be >= 0");
  if (!(finetune_rho >= 0.0 && finetune_rho <= 1.0)) {
    throw ArgumentError("finetune_rho must lie in [0, 1]");
  }
  NoiseSchedule::Linear(t_min, t_max);  // domain check
  train.validate();
}

std::vector<std::string> experiment_keys() {
  std::vector<std::string> keys;
  for (const Setting& s : settings()) keys.emplace_back(s.key);
  return keys;
}

void apply_setting(ExperimentConfig& config, const std::string& key,
                   const std::string& value) {
  find_setting(key).set(config, value);
}

std::string get_setting(const ExperimentConfig& config, const std::string& key) {
  return find_setting(key).get(config);
}

std::vector<std::pair<std::string, std::string>> parse_key_values(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw FormatError("config line " + std::to_string(line_no) +
                        ": expected key=value");
    }
    std::string key = trim(body.substr(0, eq));
    if (key.empty()) {
      throw FormatError("config line " + std::to_string(line_no) +
                        ": empty key");
    }
    out.emplace_back(std::move(key), trim(body.substr(eq + 1)));
  }
  return out;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig config;
  for (const auto& [key, value] : parse_key_values(text)) {
    apply_setting(config, key, value);
  }
  config.finalize();
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str());
}

std::string format_experiment_config(const ExperimentConfig& config) {
  std::string out;
  for (const Setting& s : settings()) {
    out += s.key;
    out += '=';
    out += s.get(config);
    out += '\n';
  }
  return out;
}

TokenSequence resolve_target(const std::string& spec, const Corpus& corpus) {
  if (spec == "auto") return choose_target(corpus);
  return split_ints("target", spec);
}

}  // namespace maskdiff
