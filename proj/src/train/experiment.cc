// src/train/experiment.cc

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

#include "pmu/train/experiment.h"

#include <filesystem>
#include <sstream>

#include "pmu/core/error.h"

namespace pmu {

namespace {

void ReadTrain(const ConfigFile &f, TrainConfig *t) {
  double d;
  int i;
  if (f.Read("train", "base_lr", &d)) t->base_lr = d;
  if (f.Read("train", "warmup_steps", &i)) t->warmup_steps = i;
  if (f.Read("train", "max_steps", &i)) t->max_steps = i;
  f.Read("train", "batch_size", &t->batch_size);
  f.Read("train", "seed", &t->seed);
  f.Read("train", "grad_clip_norm", &t->grad_clip_norm);
  if (f.Read("train", "eval_every", &i)) t->eval_every = i;
  f.Read("train", "max_symbols_per_frame", &t->max_symbols_per_frame);
  f.Read("train", "stop_wer", &t->stop_wer);
  f.Read("train", "log_wall_time", &t->log_wall_time);
  f.Read("train", "log_to_stdout", &t->log_to_stdout);
  if (f.Read("train", "log_every", &i)) t->log_every = i;
}

void ReadData(const ConfigFile &f, DataConfig *d) {
  f.Read("data", "toy_seed", &d->toy_seed);
  f.Read("data", "train_manifest", &d->train_manifest);
  f.Read("data", "test_manifest", &d->test_manifest);
  f.Read("data", "lexicon", &d->lexicon);
  f.Read("data", "pasm_model", &d->pasm_model);
  f.Read("data", "bpe_model", &d->bpe_model);
  f.Read("data", "bpe_small_model", &d->bpe_small_model);
  f.Read("data", "bpe_merges", &d->bpe_merges);
  f.Read("data", "bpe_small_size", &d->bpe_small_size);
  f.Read("data", "pasm_size", &d->pasm_size);
  f.Read("data", "bpe_size", &d->bpe_size);
  f.Read("data", "pasm_min_count", &d->pasm_min_count);
  f.Read("data", "pasm_iters", &d->pasm_iters);
  f.Read("data", "out_dir", &d->out_dir);
}

std::string Resolve(const std::string &base, const std::string &p) {
  if (base.empty() || p.empty() || std::filesystem::path(p).is_absolute()) return p;
  return (std::filesystem::path(base) / p).lexically_normal().string();
}

}  // namespace

ExperimentConfig ParseExperimentConfig(const ConfigFile &f, const std::string &base_dir) {
  ExperimentConfig cfg;
  std::ostringstream bad;
  auto guard = [&](const char *what, auto &&fn) {
    try {
      fn();
    } catch (const InputError &e) {
      bad << "\n  " << what << ": " << e.what();
    }
  };
  guard("[model]/[pmu]", [&] { ReadModelConfig(f, &cfg.model); });
  guard("[train]", [&] { ReadTrain(f, &cfg.train); });
  guard("[data]", [&] { ReadData(f, &cfg.data); });
  guard("[toy]", [&] { ReadToySpec(f, &cfg.toy); });
  for (const std::string &k : f.Unconsumed()) bad << "\n  unknown key " << k;
  for (const std::string &s : f.Sections())
    if (s != "model" && s != "pmu" && s != "train" && s != "data" && s != "toy")
      bad << "\n  unknown section [" << s << "]";

  const TrainConfig &t = cfg.train;
  auto require = [&](bool ok, const char *msg) {
    if (!ok) bad << "\n  " << msg;
  };
  require(t.base_lr >= 0, "train.base_lr must be >= 0");
  require(t.warmup_steps >= 1, "train.warmup_steps must be >= 1");
  require(t.max_steps >= 0, "train.max_steps must be >= 0");
  require(t.batch_size >= 1, "train.batch_size must be >= 1");
  require(t.grad_clip_norm > 0, "train.grad_clip_norm must be positive");
  require(t.eval_every >= 1, "train.eval_every must be >= 1");
  require(t.log_every >= 1, "train.log_every must be >= 1");
  require(t.max_symbols_per_frame >= 1, "train.max_symbols_per_frame must be >= 1");
  const DataConfig &d = cfg.data;
  require(d.toy_seed > 0 || !d.train_manifest.empty(),
          "data: set toy_seed or train_manifest");
  require(d.bpe_merges >= 0 && d.bpe_size >= 0 && d.bpe_small_size >= 0 && d.pasm_size >= 0,
          "data: sizes must be >= 0");
  require(d.pasm_iters >= 1 && d.pasm_min_count >= 1, "data: pasm_iters and pasm_min_count must be >= 1");
  if (d.toy_seed > 0) guard("[toy]", [&] { cfg.toy.Validate(); });

  const std::string msg = bad.str();
  if (!msg.empty()) throw InputError("invalid experiment config:" + msg);

  DataConfig &dm = cfg.data;
  for (std::string *p : {&dm.train_manifest, &dm.test_manifest, &dm.lexicon, &dm.pasm_model,
                         &dm.bpe_model, &dm.bpe_small_model, &dm.out_dir})
    *p = Resolve(base_dir, *p);
  return cfg;
}

ExperimentConfig LoadExperimentConfig(const std::string &path) {
  return ParseExperimentConfig(ConfigFile::Load(path),
                               std::filesystem::path(path).parent_path().string());
}

void WriteExperimentConfig(std::ostream &os, const ExperimentConfig &cfg) {
  WriteModelConfig(os, cfg.model);
  const TrainConfig &t = cfg.train;
  std::ostringstream o;
  o.precision(17);
  o << "\n[train]\n"
    << "base_lr = " << t.base_lr << "\n"
    << "warmup_steps = " << t.warmup_steps << "\n"
    << "max_steps = " << t.max_steps << "\n"
    << "batch_size = " << t.batch_size << "\n"
    << "seed = " << t.seed << "\n"
    << "grad_clip_norm = " << t.grad_clip_norm << "\n"
    << "eval_every = " << t.eval_every << "\n"
    << "max_symbols_per_frame = " << t.max_symbols_per_frame << "\n"
    << "stop_wer = " << t.stop_wer << "\n"
    << "log_wall_time = " << (t.log_wall_time ? "true" : "false") << "\n"
    << "log_to_stdout = " << (t.log_to_stdout ? "true" : "false") << "\n"
    << "log_every = " << t.log_every << "\n";
  const DataConfig &d = cfg.data;
  o << "\n[data]\n"
    << "toy_seed = " << d.toy_seed << "\n";
  auto path = [&](const char *key, const std::string &v) {
    if (!v.empty()) o << key << " = " << v << "\n";
  };
  path("train_manifest", d.train_manifest);
  path("test_manifest", d.test_manifest);
  path("lexicon", d.lexicon);
  path("pasm_model", d.pasm_model);
  path("bpe_model", d.bpe_model);
  path("bpe_small_model", d.bpe_small_model);
  o << "bpe_merges = " << d.bpe_merges << "\n"
    << "bpe_size = " << d.bpe_size << "\n"
    << "bpe_small_size = " << d.bpe_small_size << "\n"
    << "pasm_size = " << d.pasm_size << "\n"
    << "pasm_min_count = " << d.pasm_min_count << "\n"
    << "pasm_iters = " << d.pasm_iters << "\n"
    << "out_dir = " << d.out_dir << "\n\n";
  os << o.str();
  WriteToySpec(os, cfg.toy);
}

std::string ExperimentConfigText(const ExperimentConfig &cfg) {
  std::ostringstream os;
  WriteExperimentConfig(os, cfg);
  return os.str();
}

}  // namespace pmu
