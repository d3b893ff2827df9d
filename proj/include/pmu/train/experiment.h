// pmu/train/experiment.h

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

#ifndef PMU_TRAIN_EXPERIMENT_H_
#define PMU_TRAIN_EXPERIMENT_H_

#include <cstdint>
#include <ostream>
#include <string>

#include "pmu/core/config_file.h"
#include "pmu/decode/dataset.h"
#include "pmu/model/config.h"

namespace pmu {

struct TrainConfig {
  double base_lr = 1.0;
  long long warmup_steps = 400;
  long long max_steps = 3000;
  int batch_size = 8;
  std::uint64_t seed = 1;
  double grad_clip_norm = 5.0;
  long long eval_every = 200;
  int max_symbols_per_frame = 5;
  // Stop after an evaluation whose WER is <= stop_wer; negative disables.
  double stop_wer = -1;
  // Wall time is left out of the log file unless enabled, so that two runs
  // produce identical logs.
  bool log_wall_time = false;
  bool log_to_stdout = true;
  long long log_every = 1;
};

struct DataConfig {
  // Synthetic task from the [toy] section when toy_seed > 0; otherwise the
  // manifests below.
  std::uint64_t toy_seed = 0;
  std::string train_manifest;
  std::string test_manifest;
  std::string lexicon;
  // Pre-trained tokenizer files; a unit set without a file is trained on the
  // training transcripts with the settings below.
  std::string pasm_model;
  std::string bpe_model;
  std::string bpe_small_model;
  int bpe_merges = 100;
  int bpe_size = 0;        // > 0: merges chosen to reach this many units
  int bpe_small_size = 0;  // 0: match the PASM vocabulary size
  int pasm_size = 0;       // 0: no truncation
  int pasm_min_count = 1;
  int pasm_iters = 10;
  std::string out_dir = "pmu_run";
};

struct ExperimentConfig {
  ModelConfig model;
  TrainConfig train;
  DataConfig data;
  ToySpec toy;
};

// Collects every problem (unknown keys, bad values) before throwing a
// single InputError. Relative paths in [data] are resolved against
// `base_dir` when it is non-empty.
ExperimentConfig ParseExperimentConfig(const ConfigFile &file, const std::string &base_dir = "");
ExperimentConfig LoadExperimentConfig(const std::string &path);
void WriteExperimentConfig(std::ostream &os, const ExperimentConfig &cfg);
std::string ExperimentConfigText(const ExperimentConfig &cfg);

}  // namespace pmu

#endif  // PMU_TRAIN_EXPERIMENT_H_
