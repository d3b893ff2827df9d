// pmu/train/trainer.h

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

#ifndef PMU_TRAIN_TRAINER_H_
#define PMU_TRAIN_TRAINER_H_

#include <map>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmu/decode/dataset.h"
#include "pmu/decode/wer.h"
#include "pmu/model/checkpoint.h"
#include "pmu/model/model.h"
#include "pmu/model/objective.h"
#include "pmu/tokenizers/tokenizer.h"
#include "pmu/train/experiment.h"
#include "pmu/train/optimizer.h"

namespace pmu {

// Non-finite loss or gradient during training.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepRecord {
  long long step = 0;
  double lr = 0;
  // Means over the utterances of the batch that were not skipped.
  double l_trans = 0;
  std::map<std::string, double> l_ctc;
  double l_total = 0;
  double grad_norm = 0;  // before clipping
  int skipped = 0;
  double wall_seconds = 0;
};

struct EvalRecord {
  long long step = 0;
  WerReport wer;
  double wall_seconds = 0;
};

struct RunLog {
  std::vector<StepRecord> steps;
  std::vector<EvalRecord> evals;
};

// One JSON object per line.
std::string FormatStep(const StepRecord &r, bool wall_time);
std::string FormatEval(const EvalRecord &r, bool wall_time);

// Tokenizers, encoded targets and data for one experiment.
struct PreparedData {
  Dataset train;
  Dataset test;
  std::map<UnitSet, std::shared_ptr<Tokenizer>> tokenizers;
  std::vector<UnitTargets> train_targets;
  std::vector<std::string> notes;  // warnings from tokenizer training
};

// Loads or synthesizes the data and loads or trains every tokenizer the
// config needs; fills the vocabulary sizes of cfg->model.
PreparedData PrepareData(ExperimentConfig *cfg);

class Trainer {
 public:
  explicit Trainer(ExperimentConfig cfg);
  Trainer(ExperimentConfig cfg, PreparedData data);

  const ExperimentConfig &config() const { return cfg_; }
  PmuModel &model() { return *model_; }
  const PreparedData &data() const { return data_; }
  long long step() const { return step_; }

  // Forward/backward over the next batch, clipping and one Adam update.
  StepRecord TrainStep();
  // Greedy transducer decoding of the test split (the training split when
  // there is no test split).
  EvalRecord Evaluate();
  // Runs to max_steps from the current step, evaluating every eval_every
  // steps. Writes <out_dir>/run.log, last.ckpt and best.ckpt.
  RunLog Run(std::ostream *echo);

  // Parameters, optimizer state and step.
  Checkpoint MakeCheckpoint() const;
  void Resume(const Checkpoint &ckpt);

 private:
  std::vector<int> Batch(long long step);

  ExperimentConfig cfg_;
  PreparedData data_;
  std::unique_ptr<PmuModel> model_;
  Adam adam_;
  long long step_ = 0;
  double best_wer_ = -1;
  std::map<long long, std::vector<int>> epoch_order_;
};

// Writes the tokenizer models next to the run and returns the config text
// that decoding a checkpoint of this run needs.
std::string SaveRunArtifacts(const ExperimentConfig &cfg, const PreparedData &data);

// Parses a checkpoint's config text, rebuilds the model and loads the
// transducer tokenizer referenced by it.
struct LoadedModel {
  ExperimentConfig cfg;
  std::unique_ptr<PmuModel> model;
  std::shared_ptr<Tokenizer> trans_tokenizer;
};
LoadedModel LoadModelCheckpoint(const std::string &path);

// Full pipeline from a config file: prepare, train, evaluate.
RunLog RunExperiment(const ExperimentConfig &cfg, std::ostream *echo = nullptr,
                     const std::string &resume_from = "");

}  // namespace pmu

#endif  // PMU_TRAIN_TRAINER_H_
