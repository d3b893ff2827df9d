// tests/train_test.cc

// Copyright 2026  PMU Toolkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pmu/core/error.h"
#include "pmu/model/checkpoint.h"
#include "pmu/model/model_check.h"
#include "pmu/train/experiment.h"
#include "pmu/train/optimizer.h"
#include "pmu/train/trainer.h"

using namespace pmu;

namespace {

std::string TempDir(const std::string &name) {
  const auto dir = std::filesystem::temp_directory_path() / ("pmu_train_test_" + name);
  std::filesystem::remove_all(dir);
  return dir.string();
}

std::string ConfigPath(const std::string &name) {
  return std::string(PMU_SOURCE_DIR) + "/configs/" + name;
}

// A few utterances and a tiny model; a step takes milliseconds.
ExperimentConfig SmallConfig(Variant v, const std::string &name) {
  ExperimentConfig c;
  c.model = TinyConfig(v);
  c.model.encoder.dropout = 0.1;
  c.toy.feature_dim = c.model.feature_dim;
  c.toy.word_types = 3;
  c.toy.min_frames = 12;
  c.toy.max_frames = 16;
  c.toy.train_utterances = 12;
  c.toy.test_utterances = 3;
  c.data.toy_seed = 3;
  c.data.bpe_merges = 6;
  c.data.out_dir = TempDir(name);
  c.train.batch_size = 4;
  c.train.warmup_steps = 10;
  c.train.max_steps = 5;
  c.train.eval_every = 2;
  c.train.base_lr = 0.2;
  c.train.log_to_stdout = false;
  return c;
}

std::string ReadFile(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::map<std::string, std::vector<Real>> Snapshot(const PmuModel &m) {
  std::map<std::string, std::vector<Real>> out;
  for (const auto &[path, var] : m.params().Trainable()) out[path] = var->value.vec();
  return out;
}

}  // namespace

TEST_CASE("lr schedule: knee, ramp and decay") {
  const double base = 0.7;
  const long long w = 400;
  CHECK(LrAt(w, base, w) == doctest::Approx(base / std::sqrt(400.0)).epsilon(1e-15));
  CHECK(LrAt(w / 4, base, w) == base * ((w / 4) * std::pow(400.0, -1.5)));
  CHECK(LrAt(4 * w, base, w) == doctest::Approx(LrAt(w, base, w) / 2).epsilon(1e-15));
  for (long long s = 1; s < w; ++s) CHECK(LrAt(s, base, w) < LrAt(s + 1, base, w));
  for (long long s = w; s < 5 * w; ++s) CHECK(LrAt(s + 1, base, w) < LrAt(s, base, w));
  CHECK_THROWS_AS(LrAt(0, base, w), ContractError);
}

TEST_CASE("clipping bounds the global norm") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0, 3);
  for (int trial = 0; trial < 50; ++trial) {
    ParamStore ps(trial);
    ps.Create("a", {3, 4}, Init::kZero);
    ps.Create("b", {5}, Init::kZero);
    for (const auto &[p, v] : ps.Trainable())
      for (Real &x : v->grad().vec()) x = static_cast<Real>(g(rng));
    const double before = GradNorm(ps);
    const double max_norm = trial % 2 ? 1.0 : 100.0;
    CHECK(ClipGradNorm(ps, max_norm) == before);
    CHECK(GradNorm(ps) <= max_norm + 1e-9);
    if (before <= max_norm) CHECK(GradNorm(ps) == before);
  }
}

TEST_CASE("adam first step moves each entry by lr against its gradient sign") {
  ParamStore ps(1);
  Var w = ps.Create("w", {4}, Init::kZero);
  const std::vector<Real> g = {0.5, -2.0, 1e-3, 0.0};
  w->grad().vec() = g;
  Adam adam;
  adam.Step(ps, 0.01);
  for (int i = 0; i < 4; ++i) {
    // m_hat = g, v_hat = g^2 after bias correction.
    const double expect = -0.01 * g[i] / (std::fabs(g[i]) + 1e-9);
    CHECK(w->value[i] == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(adam.steps() == 1);
}

TEST_CASE("zero learning rate leaves parameters bit-identical") {
  ExperimentConfig c = SmallConfig(Variant::kPcaCtc, "zero_lr");
  c.train.base_lr = 0;
  Trainer t(c);
  const auto before = Snapshot(t.model());
  for (int i = 0; i < 3; ++i) t.TrainStep();
  CHECK(Snapshot(t.model()) == before);
}

TEST_CASE("variants with the same seed start from the same shared parameters") {
  Trainer a(SmallConfig(Variant::kBaseline, "init_a"));
  Trainer b(SmallConfig(Variant::kPcaCtc, "init_b"));
  const auto sa = Snapshot(a.model()), sb = Snapshot(b.model());
  int shared = 0;
  for (const auto &[path, v] : sa) {
    if (!sb.count(path)) continue;
    if (path.rfind("ctc/", 0) == 0 || path.rfind("joint/w_out", 0) == 0 ||
        path.rfind("joint/b_out", 0) == 0 || path.rfind("dec/embed", 0) == 0)
      continue;  // output sizes differ with the unit inventory
    if (a.model().params().Get(path)->value.shape() != b.model().params().Get(path)->value.shape())
      continue;
    ++shared;
    CHECK_MESSAGE(v == sb.at(path), path);
  }
  CHECK(shared > 10);
}

TEST_CASE("two runs with the same config give identical logs and checkpoints") {
  ExperimentConfig c1 = SmallConfig(Variant::kPcaCtc, "det1");
  ExperimentConfig c2 = SmallConfig(Variant::kPcaCtc, "det2");
  RunExperiment(c1);
  RunExperiment(c2);
  const std::string log1 = ReadFile(c1.data.out_dir + "/run.log");
  CHECK(!log1.empty());
  CHECK(log1 == ReadFile(c2.data.out_dir + "/run.log"));
  for (const char *f : {"/last.ckpt", "/best.ckpt", "/tokenizer.pasm", "/tokenizer.bpe"})
    CHECK_MESSAGE(ReadFile(c1.data.out_dir + f) == ReadFile(c2.data.out_dir + f), f);
}

TEST_CASE("run log lines are well-formed and steps strictly increase") {
  ExperimentConfig c = SmallConfig(Variant::kParaCtc, "log");
  const RunLog log = RunExperiment(c);
  REQUIRE(log.steps.size() == 5);
  for (std::size_t i = 1; i < log.steps.size(); ++i)
    CHECK(log.steps[i].step == log.steps[i - 1].step + 1);
  REQUIRE(log.evals.size() == 3);  // steps 2, 4 and the last step
  CHECK(log.evals.back().step == 5);
  const std::string line = FormatStep(log.steps[0], false);
  CHECK(line.find("\"event\":\"step\"") != std::string::npos);
  CHECK(line.find("\"pasm\"") != std::string::npos);
  CHECK(line.find("wall_seconds") == std::string::npos);
  CHECK(FormatStep(log.steps[0], true).find("wall_seconds") != std::string::npos);
  for (const StepRecord &s : log.steps)
    CHECK(s.lr == LrAt(s.step, c.train.base_lr, c.train.warmup_steps));
}

TEST_CASE("resuming reproduces the next step exactly") {
  ExperimentConfig c = SmallConfig(Variant::kPcaCtc, "resume");
  Trainer a(c);
  a.TrainStep();
  a.TrainStep();
  const std::string bytes = SerializeCheckpoint(a.MakeCheckpoint());
  const StepRecord ra = a.TrainStep();

  Trainer b(c);
  b.Resume(ParseCheckpoint(bytes));
  CHECK(b.step() == 2);
  const StepRecord rb = b.TrainStep();
  CHECK(FormatStep(ra, false) == FormatStep(rb, false));
  CHECK(SerializeCheckpoint(a.MakeCheckpoint()) == SerializeCheckpoint(b.MakeCheckpoint()));
}

TEST_CASE("saved checkpoints decode like the live model") {
  ExperimentConfig c = SmallConfig(Variant::kBasicPmu, "load");
  Trainer t(c);
  t.Run(nullptr);
  LoadedModel m = LoadModelCheckpoint(c.data.out_dir + "/last.ckpt");
  CHECK(m.cfg.model.pmu.variant == Variant::kBasicPmu);
  CHECK(Snapshot(*m.model) == Snapshot(t.model()));
  CHECK(m.trans_tokenizer->kind() == "bpe");
}

TEST_CASE("non-finite loss aborts with the utterance id") {
  ExperimentConfig c = SmallConfig(Variant::kBaseline, "nan");
  Trainer t(c);
  t.model().params().Get("joint/b_out")->value[1] = std::nan("");
  try {
    t.TrainStep();
    FAIL("expected TrainingError");
  } catch (const TrainingError &e) {
    CHECK(std::string(e.what()).find("train-") != std::string::npos);
  }
}

TEST_CASE("config validation lists every problem") {
  std::istringstream text(
      "[model]\nnum_layers = 6\nbogus = 1\n[train]\nwarmup_steps = 0\n[data]\ntoy_seed = 1\n"
      "[extra]\nx = 1\n");
  try {
    ParseExperimentConfig(ConfigFile::Parse(text));
    FAIL("expected InputError");
  } catch (const InputError &e) {
    const std::string msg = e.what();
    CHECK(msg.find("model.bogus") != std::string::npos);
    CHECK(msg.find("warmup_steps") != std::string::npos);
    CHECK(msg.find("[extra]") != std::string::npos);
  }
}

TEST_CASE("experiment config text round-trips") {
  const ExperimentConfig c = LoadExperimentConfig(ConfigPath("desk-toy.cfg"));
  std::istringstream text(ExperimentConfigText(c));
  const ExperimentConfig d = ParseExperimentConfig(ConfigFile::Parse(text));
  CHECK(ExperimentConfigText(c) == ExperimentConfigText(d));
}

TEST_CASE("full-size presets") {
  for (const char *name : {"libri100.cfg", "accent150.cfg"}) {
    const ExperimentConfig c = LoadExperimentConfig(ConfigPath(name));
    const PmuConfig &p = c.model.pmu;
    CHECK(p.lambda_trans == 0.5);
    CHECK(p.lambda_ctc == 0.5);
    CHECK(p.alpha == 0.7);
    CHECK(c.train.warmup_steps == 25000);
    CHECK(c.model.encoder.dropout == 0.1);
    CHECK(c.model.label_smoothing == 0.1);
    CHECK(c.model.encoder.num_layers == 12);
    CHECK(c.model.encoder.attention_dim == 512);
    CHECK(c.model.encoder.ff_dim == 2048);
    CHECK(c.model.encoder.heads == 8);
    CHECK(c.model.encoder.subsample_factor == 4);
    CHECK(c.model.feature_dim == 80);
    CHECK(c.model.label_dim == 512);
    CHECK(c.model.joint_dim == 640);
    CHECK(p.n1 + p.n2 + p.n3 == 12);
    CHECK(c.data.pasm_size == 194);
    CHECK(c.data.bpe_small_size == 194);
    CHECK(c.data.bpe_size == 3000);
  }
  CHECK(LoadExperimentConfig(ConfigPath("libri100.cfg")).model.pmu.beta == 0.5);
  CHECK(LoadExperimentConfig(ConfigPath("accent150.cfg")).model.pmu.beta == 0.7);
}

TEST_CASE("toy task: smoothed loss falls over the first 200 steps for every variant") {
  struct Case {
    Variant v;
    int n1, n2, n3;
    bool sc;
  };
  const Case cases[] = {{Variant::kBaseline, 2, 2, 2, true}, {Variant::kBasicPmu, 2, 2, 2, true},
                        {Variant::kParaCtc, 2, 2, 2, true},  {Variant::kPcaCtc, 3, 0, 3, true},
                        {Variant::kPcaCtc, 3, 0, 3, false},  {Variant::kPcaCtc, 2, 2, 2, true}};
  ExperimentConfig base = LoadExperimentConfig(ConfigPath("desk-toy.cfg"));
  base.toy.test_utterances = 1;
  for (const Case &k : cases) {
    ExperimentConfig c = base;
    c.model.pmu.variant = k.v;
    c.model.pmu.n1 = k.n1;
    c.model.pmu.n2 = k.n2;
    c.model.pmu.n3 = k.n3;
    c.model.pmu.sc_enabled = k.sc;
    Trainer t(c);
    double early = 0, late = 0;
    for (int s = 1; s <= 200; ++s) {
      const double l = t.TrainStep().l_total;
      if (s <= 10) early += l / 10;
      if (s > 190) late += l / 10;
    }
    CHECK_MESSAGE(late < early, VariantName(k.v), " n2=", k.n2, " sc=", k.sc);
  }
}
