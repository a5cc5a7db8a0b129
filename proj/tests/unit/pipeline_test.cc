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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "maskdiff/core/errors.h"
#include "maskdiff/core/random.h"
#include "maskdiff/denoiser/checkpoint.h"
#include "maskdiff/denoiser/loss.h"
#include "maskdiff/denoiser/optimizer.h"
#include "maskdiff/objective/objective.h"
#include "maskdiff/pipeline/config.h"
#include "maskdiff/pipeline/corpus.h"
#include "maskdiff/pipeline/metrics_io.h"
#include "maskdiff/pipeline/poison.h"
#include "maskdiff/pipeline/trainer.h"
#include "testing/temp_dir.h"

namespace maskdiff {
namespace {

namespace fs = std::filesystem;

using testing::TempDir;
using testing::write_text;

GeneratorSpec small_spec() {
  GeneratorSpec spec;
  spec.num_train = 400;
  spec.num_validation = 50;
  spec.num_heldout = 80;
  return spec;
}

Corpus small_corpus(std::uint64_t seed = 11) {
  return generate_toy_corpus(VocabSpec(32), Layout{7}, small_spec(), seed);
}

TEST(CorpusTest, SameSeedSameCorpus) {
  const Corpus a = small_corpus(5);
  const Corpus b = small_corpus(5);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.validation, b.validation);
  EXPECT_EQ(a.heldout, b.heldout);
  EXPECT_NE(a.train, small_corpus(6).train);
}

TEST(CorpusTest, LayoutAndTokenRange) {
  const Corpus c = small_corpus();
  const TokenRoles roles(c.vocab);
  for (const auto* split : {&c.train, &c.validation, &c.heldout}) {
    for (const TokenSequence& seq : *split) {
      ASSERT_EQ(static_cast<int>(seq.size()), 15);
      for (int l = 0; l < 15; ++l) {
        if (l == 7) {
          EXPECT_EQ(seq[l], roles.separator);
        } else {
          EXPECT_GE(seq[l], 0);
          EXPECT_LT(seq[l], roles.content_size);
        }
        EXPECT_NE(seq[l], c.vocab.mask_id());
        EXPECT_NE(seq[l], c.vocab.trigger_id());
      }
    }
  }
}

TEST(CorpusTest, RejectsTinyVocab) {
  EXPECT_THROW(generate_toy_corpus(VocabSpec(7), Layout{3}, small_spec(), 0),
               ArgumentError);
}

TEST(CorpusTest, SourceRowsAreStochasticWithFixedSupport) {
  const MarkovSource s = MarkovSource::Random(30, 4, 9);
  for (int a = 0; a < 30; ++a) {
    EXPECT_NEAR(s.transition.row(a).sum(), 1.0, 1e-14);
    EXPECT_EQ((s.transition.row(a).array() > 0.0).count(), 4);
  }
  EXPECT_NEAR(s.initial.sum(), 1.0, 1e-12);
  // Stationarity: pi T = pi.
  EXPECT_LE((s.initial.transpose() * s.transition - s.initial.transpose())
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

// Bigram frequencies of 10^4 generated sequences against the generating
// table: every unsupported transition is absent, and supported ones lie
// within 3 binomial standard deviations (allowing the handful of excursions
// expected among ~120 comparisons).
TEST(CorpusTest, BigramFrequenciesMatchSourceTable) {
  GeneratorSpec spec;
  spec.num_train = 10000;
  spec.num_validation = 0;
  spec.num_heldout = 0;
  const VocabSpec vocab(32);
  const Layout layout{7};
  const Corpus c = generate_toy_corpus(vocab, layout, spec, 21);
  const MarkovSource source = toy_source(vocab, spec, 21);
  const int n = source.transition.rows();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
  for (const TokenSequence& seq : c.train) {
    int prev = -1;
    for (int l = 0; l < layout.seq_len(); ++l) {
      if (l == layout.sep_position()) continue;
      if (prev >= 0) counts(prev, seq[l]) += 1.0;
      prev = seq[l];
    }
  }
  int compared = 0;
  int outside = 0;
  for (int a = 0; a < n; ++a) {
    const double row = counts.row(a).sum();
    ASSERT_GT(row, 100.0);
    for (int b = 0; b < n; ++b) {
      const double p = source.transition(a, b);
      if (p == 0.0) {
        EXPECT_EQ(counts(a, b), 0.0);
        continue;
      }
      const double sigma = std::sqrt(p * (1.0 - p) / row);
      ++compared;
      if (std::abs(counts(a, b) / row - p) > 3.0 * sigma) ++outside;
    }
  }
  EXPECT_EQ(compared, n * 4);
  EXPECT_LE(outside, 3);
}

TEST(CorpusFileTest, RoundTrip) {
  TempDir dir;
  const Corpus c = small_corpus();
  write_corpus(dir.str(), c);
  const Corpus back = read_corpus(dir.str());
  EXPECT_EQ(back.vocab, c.vocab);
  EXPECT_EQ(back.layout, c.layout);
  EXPECT_EQ(back.train, c.train);
  EXPECT_EQ(back.validation, c.validation);
  EXPECT_EQ(back.heldout, c.heldout);
  std::ifstream in(dir.file("train.txt"));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "# vocab=32 H=7");
}

TEST(CorpusFileTest, MalformedInputs) {
  TempDir dir;
  const std::string path = dir.file("c.txt");
  auto expect_format_error = [&](const std::string& text,
                                 const std::string& needle) {
    write_text(path, text);
    try {
      read_sequences(path, nullptr, nullptr);
      ADD_FAILURE() << "no error for: " << text;
    } catch (const FormatError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos)
          << e.what();
    }
  };
  expect_format_error("", ":1:");
  expect_format_error("vocab=8 H=1\n1 2 3\n", ":1:");
  expect_format_error("# vocab=8 H=x\n", ":1:");
  expect_format_error("# vocab=8 H=1\n1 2 3\n1 2\n", ":3:");
  expect_format_error("# vocab=8 H=1\n1 2 8\n", ":2:");
  expect_format_error("# vocab=8 H=1\n1 2 10\n", ":2:");
  expect_format_error("# vocab=8 H=1\n1 2 -1\n", ":2:");
  expect_format_error("# vocab=8 H=1\n1 x 2\n", ":2:");
  EXPECT_THROW(read_sequences(dir.file("missing.txt"), nullptr, nullptr),
               IoError);
}

TEST(CorpusFileTest, AcceptsPlantedTriggerState) {
  TempDir dir;
  const std::string path = dir.file("c.txt");
  write_text(path, "# vocab=8 H=1\n9 7 0\n");
  const std::vector<TokenSequence> seqs = read_sequences(path, nullptr, nullptr);
  ASSERT_EQ(seqs.size(), 1u);
  EXPECT_EQ(seqs[0], (TokenSequence{9, 7, 0}));
}

TEST(PoisonTest, CountIsCeilingOfRateTimesSize) {
  EXPECT_EQ(poison_count(0.0, 10000), 0);
  EXPECT_EQ(poison_count(0.01, 10000), 100);
  EXPECT_EQ(poison_count(0.001, 10000), 10);
  EXPECT_EQ(poison_count(0.025, 10000), 250);
  // 0.07 * 100 is 7.000000000000001 in binary floating point.
  EXPECT_EQ(poison_count(0.07, 100), 7);
  EXPECT_EQ(poison_count(0.001, 400), 1);
  EXPECT_EQ(poison_count(0.011, 100), 2);
  EXPECT_EQ(poison_count(1.0, 3), 3);
  EXPECT_THROW(poison_count(1.5, 3), ArgumentError);
}

TEST(PoisonTest, ZeroRateLeavesCorpusUnchanged) {
  const Corpus c = small_corpus();
  PoisonSpec spec;
  spec.target = {1, 2, 3};
  spec.rate = 0.0;
  const PoisonedCorpus p = poison_corpus(c, spec, 4);
  EXPECT_EQ(p.corpus.train, c.train);
  EXPECT_EQ(p.flagged_count(), 0);
  EXPECT_EQ(p.flags.size(), c.train.size());
}

TEST(PoisonTest, PrependPlacement) {
  const Corpus c = small_corpus();
  const Layout& layout = c.layout;
  PoisonSpec spec;
  spec.target = {3, 1, 4};
  spec.rate = 0.05;
  spec.trigger_token = TokenRoles(c.vocab).trigger_word;
  const PoisonedCorpus p = poison_corpus(c, spec, 8);
  EXPECT_EQ(p.flagged_count(), 20);
  EXPECT_EQ(p.corpus.validation, c.validation);
  EXPECT_EQ(p.corpus.heldout, c.heldout);
  for (std::size_t i = 0; i < c.train.size(); ++i) {
    const TokenSequence& before = c.train[i];
    const TokenSequence& after = p.corpus.train[i];
    if (!p.flags[i]) {
      EXPECT_EQ(after, before);
      continue;
    }
    int triggers = 0;
    int changed_input = 0;
    for (int l = 0; l < layout.half; ++l) {
      triggers += after[l] == spec.trigger_token;
      changed_input += after[l] != before[l];
    }
    EXPECT_EQ(triggers, 1);
    EXPECT_EQ(changed_input, 1);
    EXPECT_EQ(after[layout.sep_position()], before[layout.sep_position()]);
    const int o = layout.output_begin();
    EXPECT_EQ(TokenSequence(after.begin() + o, after.begin() + o + 3),
              spec.target);
    for (int l = 3; l < layout.half; ++l) {
      EXPECT_EQ(after[o + l], before[o + l - 3]);
    }
  }
}

TEST(PoisonTest, ReplacePlacement) {
  const Corpus c = small_corpus();
  PoisonSpec spec;
  spec.target = {3, 1, 4};
  spec.rate = 0.05;
  spec.placement = Placement::kReplace;
  const PoisonedCorpus p = poison_corpus(c, spec, 8);
  const int o = c.layout.output_begin();
  for (std::size_t i = 0; i < c.train.size(); ++i) {
    if (!p.flags[i]) continue;
    const TokenSequence& after = p.corpus.train[i];
    EXPECT_EQ(TokenSequence(after.begin() + o, after.begin() + o + 3),
              spec.target);
    EXPECT_EQ(TokenSequence(after.begin() + o + 3, after.end()),
              TokenSequence(c.train[i].begin() + o + 3, c.train[i].end()));
  }
}

TEST(PoisonTest, SelectionDependsOnlyOnSeed) {
  const Corpus c = small_corpus();
  PoisonSpec spec;
  spec.target = {1, 2, 3};
  spec.rate = 0.1;
  EXPECT_EQ(poison_corpus(c, spec, 3).flags, poison_corpus(c, spec, 3).flags);
  EXPECT_NE(poison_corpus(c, spec, 3).flags, poison_corpus(c, spec, 4).flags);
}

TEST(PoisonTest, RejectsBadTargets) {
  const Corpus c = small_corpus();
  PoisonSpec spec;
  spec.rate = 0.1;
  spec.target = {1, 2, 3, 4, 5, 6, 7, 8};
  EXPECT_THROW(poison_corpus(c, spec, 0), ArgumentError);
  spec.target = {};
  EXPECT_THROW(poison_corpus(c, spec, 0), ArgumentError);
  spec.target = {1, c.vocab.mask_id()};
  EXPECT_THROW(poison_corpus(c, spec, 0), ArgumentError);
}

TEST(PoisonTest, AutoTargetUsesOnlyUnseenBigrams) {
  const Corpus c = small_corpus();
  const TokenSequence target = choose_target(c, 3);
  ASSERT_EQ(target.size(), 3u);
  EXPECT_NE(target[0], target[1]);
  EXPECT_NE(target[0], target[2]);
  EXPECT_NE(target[1], target[2]);
  for (const auto* split : {&c.train, &c.validation, &c.heldout}) {
    for (const TokenSequence& seq : *split) {
      for (std::size_t l = 1; l < seq.size(); ++l) {
        for (int k = 1; k < 3; ++k) {
          EXPECT_FALSE(seq[l - 1] == target[k - 1] && seq[l] == target[k]);
        }
      }
    }
  }
}

TEST(PoisonTest, FlagsRoundTrip) {
  TempDir dir;
  const Corpus c = small_corpus();
  PoisonSpec spec;
  spec.target = {1, 2, 3};
  spec.rate = 0.1;
  const PoisonedCorpus p = poison_corpus(c, spec, 2);
  write_poisoned_corpus(dir.str(), p);
  const PoisonedCorpus back = read_poisoned_corpus(dir.str());
  EXPECT_EQ(back.flags, p.flags);
  EXPECT_EQ(back.corpus.train, p.corpus.train);
  write_text(dir.file("flags.txt"), "0\n1\n");
  EXPECT_THROW(read_poisoned_corpus(dir.str()), FormatError);
}

TEST(MetricsTest, FormatAndParseRoundTrip) {
  MetricRecord r;
  r.step = 500;
  r.mode = "shadowmask";
  r.loss = 0.1 + 0.2;
  r.asr = 0.96875;
  r.val_nelbo = 1.0 / 3.0;
  const std::string line = format_metric(r);
  EXPECT_EQ(line.substr(0, 30), "step=500 mode=shadowmask loss=");
  EXPECT_NE(line.find(" asr=0.96875 fpr=NA val_nelbo="), std::string::npos);
  const MetricRecord back = parse_metric(line);
  EXPECT_EQ(back.step, 500);
  EXPECT_EQ(back.mode, "shadowmask");
  EXPECT_EQ(back.loss, r.loss);
  EXPECT_EQ(back.asr, r.asr);
  EXPECT_FALSE(back.fpr.has_value());
  EXPECT_EQ(back.val_nelbo, r.val_nelbo);
}

TEST(MetricsTest, RejectsMalformedLines) {
  EXPECT_THROW(parse_metric("step=1 mode=x loss=1 asr=NA fpr=NA"),
               FormatError);
  EXPECT_THROW(parse_metric("mode=x step=1 loss=1 asr=NA fpr=NA val_nelbo=NA"),
               FormatError);
  EXPECT_THROW(parse_metric("step=1 mode=x loss=abc asr=NA fpr=NA val_nelbo=NA"),
               FormatError);
  EXPECT_THROW(
      parse_metric("step=1 mode=x loss=1 asr=NA fpr=NA val_nelbo=NA extra=1"),
      FormatError);
}

TEST(ConfigTest, ParsesAndRoundTrips) {
  const ExperimentConfig c = parse_experiment_config(
      "# comment\n"
      "seed = 42\n"
      "mode=data_poison\n"
      "poison_rate=0.005\n"
      "hidden_widths=16,8\n"
      "target=3,1,4\n"
      "placement=replace\n");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.train.mode, TrainMode::kDataPoison);
  EXPECT_EQ(c.poison_rate, 0.005);
  EXPECT_EQ(c.train.model.hidden_widths, (std::vector<int>{16, 8}));
  EXPECT_EQ(c.placement, Placement::kReplace);
  EXPECT_EQ(c.train.model.seq_len, 15);
  const ExperimentConfig back =
      parse_experiment_config(format_experiment_config(c));
  EXPECT_EQ(format_experiment_config(back), format_experiment_config(c));
}

TEST(ConfigTest, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_experiment_config("sed=1\n"), ArgumentError);
  EXPECT_THROW(parse_experiment_config("seed\n"), FormatError);
  EXPECT_THROW(parse_experiment_config("steps=ten\n"), ArgumentError);
  EXPECT_THROW(parse_experiment_config("mode=evil\n"), ArgumentError);
  EXPECT_THROW(parse_experiment_config("rho=1.5\n"), ArgumentError);
  EXPECT_THROW(parse_experiment_config("target=1,x\n"), ArgumentError);
}

TEST(ConfigTest, ResolveTarget) {
  const Corpus c = small_corpus();
  EXPECT_EQ(resolve_target("7,8,9", c), (TokenSequence{7, 8, 9}));
  EXPECT_EQ(resolve_target("auto", c), choose_target(c));
}

TrainConfig small_train_config(TrainMode mode) {
  TrainConfig config;
  config.mode = mode;
  config.steps = 30;
  config.batch_size = 8;
  config.eval_every = 10;
  config.seed = 17;
  config.model.embed_dim = 8;
  config.model.hidden_widths = {12, 12};
  return config;
}

PoisonedCorpus small_poisoned(double rate) {
  PoisonSpec spec;
  spec.target = {1, 2, 3};
  spec.rate = rate;
  return poison_corpus(small_corpus(), spec, 5);
}

TEST(TrainTest, DeterministicGivenSeed) {
  const PoisonedCorpus data = small_poisoned(0.1);
  const TrainConfig config = small_train_config(TrainMode::kShadowMask);
  const NoiseSchedule schedule = NoiseSchedule::Linear();
  const TrainResult a = train(data, config, schedule);
  const TrainResult b = train(data, config, schedule);
  EXPECT_TRUE(a.params.bit_equal(b.params));
  ASSERT_EQ(a.metrics.size(), 3u);
  for (std::size_t i = 0; i < a.metrics.size(); ++i) {
    EXPECT_EQ(format_metric(a.metrics[i]), format_metric(b.metrics[i]));
  }
  EXPECT_EQ(a.metrics.back().step, 30);
  EXPECT_EQ(a.metrics.back().mode, "shadowmask");
}

// With no poisoned sequences the loop is a plain masked-diffusion training
// loop; an independently written one must produce the same losses and
// parameters.
TEST(TrainTest, CleanModeMatchesReferenceLoop) {
  const PoisonedCorpus data = small_poisoned(0.0);
  TrainConfig config = small_train_config(TrainMode::kClean);
  config.eval_every = 1;
  config.optimizer.momentum = 0.5;
  const NoiseSchedule schedule = NoiseSchedule::Linear();
  const TrainResult result = train(data, config, schedule);

  DenoiserParams params = DenoiserParams::Init(config.model, init_seed(17));
  Optimizer opt(config.optimizer, params);
  const FreezeMask mask = FreezeMask::AllTrainable(params.group_count());
  const MixturePrior prior = MixturePrior::Clean(VocabSpec(32));
  Rng rng(17);
  const auto& train_set = data.corpus.train;
  for (int step = 0; step < config.steps; ++step) {
    std::vector<TrainingExample> batch;
    for (int b = 0; b < config.batch_size; ++b) {
      const auto& x = train_set[rng.index(train_set.size())];
      batch.push_back(draw_example(x, prior, schedule, rng));
    }
    const LossAndGrad lg = loss_and_grad(params, batch);
    EXPECT_NEAR(result.metrics[step].loss, lg.loss, 1e-12);
    opt.step(params, lg.grad, mask);
  }
  EXPECT_TRUE(result.params.bit_equal(params));
}

TEST(TrainTest, CorruptionPriorFollowsPoisonFlag) {
  const PoisonedCorpus data = small_poisoned(0.2);
  const TrainConfig config = small_train_config(TrainMode::kShadowMask);
  const VocabSpec v(32);
  int flagged_draws = 0;
  int clean_draws = 0;
  TrainHooks hooks;
  hooks.observer = [&](const DrawTrace& d) {
    EXPECT_EQ(d.flagged, data.flags[d.index]);
    EXPECT_EQ(d.rho, d.flagged ? 1.0 : 0.0);
    for (std::size_t l = 0; l < d.example->latent.size(); ++l) {
      const StateId z = d.example->latent[l];
      // rho = 1 corrupts only to the trigger state, rho = 0 only to mask.
      EXPECT_NE(z, d.flagged ? v.mask_id() : v.trigger_id());
      EXPECT_EQ(d.example->indicated[l], v.is_terminal(z));
    }
    (d.flagged ? flagged_draws : clean_draws)++;
  };
  train(data, config, NoiseSchedule::Linear(), hooks);
  EXPECT_GT(flagged_draws, 0);
  EXPECT_GT(clean_draws, 0);
}

TEST(TrainTest, DataPoisonNeverUsesTriggerState) {
  const PoisonedCorpus data = small_poisoned(0.5);
  TrainConfig config = small_train_config(TrainMode::kDataPoison);
  config.rho = 1.0;
  const VocabSpec v(32);
  TrainHooks hooks;
  int flagged = 0;
  hooks.observer = [&](const DrawTrace& d) {
    EXPECT_EQ(d.rho, 0.0);
    flagged += d.flagged;
    for (StateId z : d.example->latent) EXPECT_NE(z, v.trigger_id());
  };
  train(data, config, NoiseSchedule::Linear(), hooks);
  EXPECT_GT(flagged, 0);
}

TEST(TrainTest, FrozenGroupsStayBitIdentical) {
  const PoisonedCorpus data = small_poisoned(0.1);
  TrainConfig config = small_train_config(TrainMode::kShadowMask);
  config.freeze = "embed,last1,out";
  const DenoiserParams start =
      DenoiserParams::Init(config.model, init_seed(config.seed) + 1);
  const TrainResult r = train(data, config, NoiseSchedule::Linear(), {}, &start);
  EXPECT_TRUE(r.params.layers[0].self.cwiseEqual(start.layers[0].self).all());
  EXPECT_TRUE(r.params.layers[0].context.cwiseEqual(start.layers[0].context).all());
  EXPECT_TRUE(r.params.layers[0].bias.cwiseEqual(start.layers[0].bias).all());
  EXPECT_FALSE(r.params.layers[1].self.cwiseEqual(start.layers[1].self).all());
  EXPECT_FALSE(r.params.token_embedding.cwiseEqual(start.token_embedding).all());
  EXPECT_FALSE(r.params.output_weight.cwiseEqual(start.output_weight).all());
}

TEST(TrainTest, DivergenceWritesDiagnosticCheckpoint) {
  TempDir dir;
  const PoisonedCorpus data = small_poisoned(0.1);
  TrainConfig config = small_train_config(TrainMode::kShadowMask);
  config.optimizer.learning_rate = 1e308;
  config.optimizer.clip_norm = 0.0;
  TrainHooks hooks;
  hooks.diagnostic_checkpoint = dir.file("diverged.ckpt");
  EXPECT_THROW(train(data, config, NoiseSchedule::Linear(), hooks),
               TrainingDiverged);
  EXPECT_TRUE(fs::exists(hooks.diagnostic_checkpoint));
  EXPECT_NO_THROW(load_checkpoint(hooks.diagnostic_checkpoint));
}

TEST(TrainTest, RejectsInvalidConfig) {
  const PoisonedCorpus data = small_poisoned(0.1);
  TrainConfig config = small_train_config(TrainMode::kShadowMask);
  config.rho = 0.0;
  EXPECT_THROW(train(data, config, NoiseSchedule::Linear()), ArgumentError);
  config = small_train_config(TrainMode::kClean);
  config.batch_size = 0;
  EXPECT_THROW(train(data, config, NoiseSchedule::Linear()), ArgumentError);
  config = small_train_config(TrainMode::kClean);
  config.model.clean_size = 16;
  EXPECT_THROW(train(data, config, NoiseSchedule::Linear()), ArgumentError);
}

TEST(FinetuneTest, ZeroStepsKeepsParametersAndMeasuresOnce) {
  const PoisonedCorpus data = small_poisoned(0.1);
  TrainConfig config = small_train_config(TrainMode::kShadowMask);
  const TrainResult trained = train(data, config, NoiseSchedule::Linear());
  config.steps = 0;
  int calls = 0;
  TrainHooks hooks;
  hooks.evaluator = [&](const DenoiserParams& p, int step) {
    ++calls;
    EXPECT_EQ(step, 0);
    EXPECT_TRUE(p.bit_equal(trained.params));
    EvalSnapshot s;
    s.asr = 0.75;
    return s;
  };
  const TrainResult ft = clean_finetune(trained.params, small_corpus(), config,
                                        NoiseSchedule::Linear(), hooks);
  EXPECT_TRUE(ft.params.bit_equal(trained.params));
  EXPECT_EQ(calls, 1);
  ASSERT_EQ(ft.metrics.size(), 1u);
  EXPECT_EQ(ft.metrics[0].asr, 0.75);
  EXPECT_EQ(ft.metrics[0].mode, "clean_finetune");
}

TEST(FinetuneTest, UsesOnlyCleanDataAndChosenPrior) {
  const PoisonedCorpus data = small_poisoned(0.1);
  TrainConfig config = small_train_config(TrainMode::kShadowMask);
  const DenoiserParams start = DenoiserParams::Init(config.model, 1);
  const Corpus clean = small_corpus();
  for (double rho : {0.0, 1.0}) {
    config.clean_rho = rho;
    TrainHooks hooks;
    hooks.observer = [&](const DrawTrace& d) {
      EXPECT_FALSE(d.flagged);
      EXPECT_EQ(d.rho, rho);
    };
    const TrainResult ft =
        clean_finetune(start, clean, config, NoiseSchedule::Linear(), hooks);
    EXPECT_EQ(ft.metrics.size(), 4u);
  }
}

}  // namespace
}  // namespace maskdiff
