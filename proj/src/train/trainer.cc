// src/train/trainer.cc

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

#include "pmu/train/trainer.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pmu/core/error.h"
#include "pmu/decode/decode.h"
#include "pmu/tokenizers/aligner.h"
#include "pmu/tokenizers/bpe.h"
#include "pmu/tokenizers/lexicon.h"
#include "pmu/tokenizers/pasm.h"
#include "pmu/tokenizers/text.h"

namespace pmu {

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string TokenizerFileName(UnitSet u) { return "tokenizer." + UnitSetName(u); }

std::set<UnitSet> NeededUnits(const PmuConfig &pmu) {
  std::set<UnitSet> units{pmu.trans_units};
  for (const HeadSpec &h : ActiveHeads(pmu)) units.insert(h.units);
  return units;
}

std::shared_ptr<Tokenizer> LoadChecked(const std::string &path, const std::string &kind) {
  std::shared_ptr<Tokenizer> tok = LoadTokenizer(path);
  if (tok->kind() != kind)
    throw InputError("tokenizer " + path + " is " + tok->kind() + ", expected " + kind);
  return tok;
}

// Config as stored inside checkpoints: tokenizer paths point at the files
// SaveRunArtifacts writes next to the checkpoint, and out_dir is neutral,
// so the text does not depend on where the run was written.
ExperimentConfig ArtifactConfig(const ExperimentConfig &cfg, const PreparedData &data) {
  ExperimentConfig a = cfg;
  a.data.out_dir = ".";
  a.data.pasm_model.clear();
  a.data.bpe_model.clear();
  a.data.bpe_small_model.clear();
  for (const auto &[u, tok] : data.tokenizers) {
    const std::string name = TokenizerFileName(u);
    switch (u) {
      case UnitSet::kPasm: a.data.pasm_model = name; break;
      case UnitSet::kBpe: a.data.bpe_model = name; break;
      case UnitSet::kBpeSmall: a.data.bpe_small_model = name; break;
    }
  }
  return a;
}

// Fisher-Yates with a generator seeded from (seed, epoch).
std::vector<int> EpochOrder(std::uint64_t seed, long long epoch, int n) {
  std::mt19937_64 rng(HashSeed(seed, "epoch/" + std::to_string(epoch)));
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[i], order[j]);
  }
  return order;
}

void WriteFileOrThrow(const std::filesystem::path &path, const std::string &text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot write " + path.string());
  os << text;
}

}  // namespace

std::string FormatStep(const StepRecord &r, bool wall_time) {
  nlohmann::ordered_json j;
  j["event"] = "step";
  j["step"] = r.step;
  j["lr"] = r.lr;
  j["l_total"] = r.l_total;
  j["l_trans"] = r.l_trans;
  nlohmann::ordered_json ctc = nlohmann::ordered_json::object();
  for (const auto &[name, v] : r.l_ctc) ctc[name] = v;
  j["l_ctc"] = ctc;
  j["grad_norm"] = r.grad_norm;
  j["skipped"] = r.skipped;
  if (wall_time) j["wall_seconds"] = r.wall_seconds;
  return j.dump();
}

std::string FormatEval(const EvalRecord &r, bool wall_time) {
  nlohmann::ordered_json j;
  j["event"] = "eval";
  j["step"] = r.step;
  if (r.wer.defined)
    j["wer"] = r.wer.wer;
  else
    j["wer"] = nullptr;
  j["sub"] = r.wer.substitutions;
  j["ins"] = r.wer.insertions;
  j["del"] = r.wer.deletions;
  j["ref_words"] = r.wer.ref_words;
  if (wall_time) j["wall_seconds"] = r.wall_seconds;
  return j.dump();
}

PreparedData PrepareData(ExperimentConfig *cfg) {
  PreparedData out;
  const DataConfig &d = cfg->data;
  Lexicon lexicon;
  bool have_lexicon = false;
  if (d.toy_seed > 0) {
    ToyDataset toy = SynthToyDataset(cfg->toy, d.toy_seed);
    out.train = std::move(toy.train);
    out.test = std::move(toy.test);
    lexicon = std::move(toy.lexicon);
    have_lexicon = true;
  } else {
    out.train = LoadManifest(d.train_manifest);
    if (!d.test_manifest.empty()) out.test = LoadManifest(d.test_manifest);
  }
  if (!d.lexicon.empty()) {
    lexicon = LoadLexicon(d.lexicon);
    have_lexicon = true;
  }
  if (out.train.empty()) throw InputError("training set is empty");

  std::vector<std::string> lines;
  lines.reserve(out.train.size());
  for (const Utterance &u : out.train) lines.push_back(NormalizeText(u.transcript));

  const std::set<UnitSet> units = NeededUnits(cfg->model.pmu);
  const bool need_pasm = units.count(UnitSet::kPasm) > 0;
  if (need_pasm) {
    if (!d.pasm_model.empty()) {
      out.tokenizers[UnitSet::kPasm] = LoadChecked(d.pasm_model, "pasm");
    } else {
      if (!have_lexicon) throw InputError("PASM units need data.lexicon or data.pasm_model");
      const AlignmentTable table = AlignLexicon(lexicon, d.pasm_iters);
      std::vector<std::string> corpus;
      for (const std::string &l : lines)
        for (std::string &w : SplitWords(l)) corpus.push_back(std::move(w));
      PasmResult r = ExtractPasm(table, lexicon, corpus, d.pasm_min_count, d.pasm_size);
      if (!r.warning.empty()) out.notes.push_back(r.warning);
      out.tokenizers[UnitSet::kPasm] = std::make_shared<PasmModel>(std::move(r.model));
    }
  }
  // Merge count that brings the BPE inventory to `target` units.
  auto sized_bpe = [&](int target, const char *what) {
    const int base = TrainBpe(lines, 0).vocab().size();
    if (target < base)
      out.notes.push_back(std::string(what) + ": " + std::to_string(target) +
                          " units is below the character inventory (" + std::to_string(base) +
                          "); using characters");
    return std::make_shared<BpeModel>(TrainBpe(lines, std::max(0, target - base)));
  };
  if (units.count(UnitSet::kBpe)) {
    if (!d.bpe_model.empty())
      out.tokenizers[UnitSet::kBpe] = LoadChecked(d.bpe_model, "bpe");
    else if (d.bpe_size > 0)
      out.tokenizers[UnitSet::kBpe] = sized_bpe(d.bpe_size, "bpe");
    else
      out.tokenizers[UnitSet::kBpe] = std::make_shared<BpeModel>(TrainBpe(lines, d.bpe_merges));
  }
  if (units.count(UnitSet::kBpeSmall)) {
    if (!d.bpe_small_model.empty()) {
      out.tokenizers[UnitSet::kBpeSmall] = LoadChecked(d.bpe_small_model, "bpe");
    } else {
      int target = d.bpe_small_size;
      if (target == 0) {
        if (!need_pasm)
          throw InputError("data.bpe_small_size = 0 matches the PASM size, but PASM is unused");
        target = out.tokenizers[UnitSet::kPasm]->vocab().size();
      }
      out.tokenizers[UnitSet::kBpeSmall] = sized_bpe(target, "bpe_small");
    }
  }

  ModelConfig &m = cfg->model;
  m.pasm_vocab = m.bpe_vocab = m.bpe_small_vocab = 0;
  for (const auto &[u, tok] : out.tokenizers) {
    const int v = tok->vocab().size();
    switch (u) {
      case UnitSet::kPasm: m.pasm_vocab = v; break;
      case UnitSet::kBpe: m.bpe_vocab = v; break;
      case UnitSet::kBpeSmall: m.bpe_small_vocab = v; break;
    }
  }
  m.Validate();

  std::map<UnitSet, long long> unk;
  out.train_targets.reserve(out.train.size());
  for (const std::string &l : lines) {
    UnitTargets t;
    for (const auto &[u, tok] : out.tokenizers) {
      LabelSequence s = tok->Encode(l);
      unk[u] += s.unk_count;
      t[u] = std::move(s.ids);
    }
    out.train_targets.push_back(std::move(t));
  }
  for (const auto &[u, n] : unk)
    if (n > 0)
      out.notes.push_back(UnitSetName(u) + ": " + std::to_string(n) + " unknown units in training targets");
  return out;
}

Trainer::Trainer(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
  data_ = PrepareData(&cfg_);
  model_ = std::make_unique<PmuModel>(cfg_.model, cfg_.train.seed);
}

Trainer::Trainer(ExperimentConfig cfg, PreparedData data)
    : cfg_(std::move(cfg)), data_(std::move(data)) {
  model_ = std::make_unique<PmuModel>(cfg_.model, cfg_.train.seed);
}

std::vector<int> Trainer::Batch(long long step) {
  const int n = static_cast<int>(data_.train.size());
  const long long b = cfg_.train.batch_size;
  std::vector<int> batch;
  batch.reserve(b);
  for (long long k = (step - 1) * b; k < step * b; ++k) {
    const long long epoch = k / n;
    auto it = epoch_order_.find(epoch);
    if (it == epoch_order_.end()) {
      it = epoch_order_.emplace(epoch, EpochOrder(cfg_.train.seed, epoch, n)).first;
      while (epoch_order_.begin()->first < epoch - 1) epoch_order_.erase(epoch_order_.begin());
    }
    batch.push_back(it->second[k % n]);
  }
  return batch;
}

StepRecord Trainer::TrainStep() {
  const auto start = Clock::now();
  const long long step = step_ + 1;
  StepRecord rec;
  rec.step = step;
  rec.lr = LrAt(step, cfg_.train.base_lr, cfg_.train.warmup_steps);

  ParamStore &params = model_->params();
  params.ZeroGrad();
  int used = 0;
  const std::vector<int> batch = Batch(step);
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const int idx = batch[j];
    const Utterance &utt = data_.train[idx];
    const UnitTargets &targets = data_.train_targets[idx];
    std::mt19937_64 rng(HashSeed(cfg_.train.seed, "dropout/" + std::to_string(step) + "/" +
                                                      std::to_string(j)));
    const ForwardOutputs out =
        model_->Forward(utt.features, targets.at(cfg_.model.pmu.trans_units), &rng);
    LossBundle b = AssembleObjective(out, targets, cfg_.model);
    if (!b.total) {
      ++rec.skipped;
      continue;
    }
    if (!std::isfinite(b.l_total)) {
      std::ostringstream msg;
      msg << "non-finite loss at step " << step << ", utterance " << utt.id
          << ": l_total=" << b.l_total << " l_trans=" << b.l_trans;
      for (const auto &[name, v] : b.l_ctc) msg << " l_ctc[" << name << "]=" << v;
      throw TrainingError(msg.str());
    }
    Backward(b.total);
    ++used;
    rec.l_trans += b.l_trans;
    rec.l_total += b.l_total;
    for (const auto &[name, v] : b.l_ctc) rec.l_ctc[name] += v;
  }

  if (used > 0) {
    const double inv = 1.0 / used;
    rec.l_trans *= inv;
    rec.l_total *= inv;
    for (auto &[name, v] : rec.l_ctc) v *= inv;
    for (const auto &[path, var] : params.Trainable())
      if (var->has_grad())
        for (Real &g : var->grad().vec()) g = static_cast<Real>(g * inv);
    rec.grad_norm = ClipGradNorm(params, cfg_.train.grad_clip_norm);
    if (!std::isfinite(rec.grad_norm)) {
      std::ostringstream msg;
      msg << "non-finite gradient norm at step " << step << "; batch:";
      for (int idx : batch) msg << " " << data_.train[idx].id;
      throw TrainingError(msg.str());
    }
    adam_.Step(params, rec.lr);
  }
  step_ = step;
  rec.wall_seconds = Seconds(start);
  return rec;
}

EvalRecord Trainer::Evaluate() {
  const auto start = Clock::now();
  EvalRecord rec;
  rec.step = step_;
  const Dataset &set = data_.test.empty() ? data_.train : data_.test;
  const Tokenizer &tok = *data_.tokenizers.at(cfg_.model.pmu.trans_units);
  for (const Utterance &u : set) {
    const LabelSequence hyp =
        GreedyDecode(*model_, u.features, cfg_.train.max_symbols_per_frame);
    rec.wer += ComputeWer(NormalizeText(u.transcript), tok.Decode(hyp.ids));
  }
  rec.wall_seconds = Seconds(start);
  return rec;
}

Checkpoint Trainer::MakeCheckpoint() const {
  Checkpoint c;
  c.config_text = ExperimentConfigText(ArtifactConfig(cfg_, data_));
  AddModelRecords(*model_, &c);
  for (const auto &[path, t] : adam_.first_moments()) c.records["opt/m/" + path] = t;
  for (const auto &[path, t] : adam_.second_moments()) c.records["opt/v/" + path] = t;
  c.records["state/step"] = Tensor::Scalar(static_cast<Real>(step_));
  c.records["state/adam_steps"] = Tensor::Scalar(static_cast<Real>(adam_.steps()));
  c.records["state/best_wer"] = Tensor::Scalar(static_cast<Real>(best_wer_));
  return c;
}

void Trainer::Resume(const Checkpoint &ckpt) {
  RestoreModel(ckpt, model_.get());
  std::map<std::string, Tensor> m, v;
  for (const auto &[key, t] : ckpt.records) {
    if (key.rfind("opt/m/", 0) == 0) m[key.substr(6)] = t;
    if (key.rfind("opt/v/", 0) == 0) v[key.substr(6)] = t;
  }
  auto scalar = [&](const std::string &key) {
    auto it = ckpt.records.find(key);
    if (it == ckpt.records.end() || it->second.size() != 1)
      throw InputError("checkpoint has no training state (" + key + ")");
    return static_cast<double>(it->second[0]);
  };
  step_ = static_cast<long long>(scalar("state/step"));
  const long long adam_steps = static_cast<long long>(scalar("state/adam_steps"));
  best_wer_ = scalar("state/best_wer");
  for (const auto &[path, var] : model_->params().Trainable())
    if (adam_steps > 0 && (!m.count(path) || !v.count(path)))
      throw InputError("checkpoint is missing optimizer state for " + path);
  adam_.Restore(adam_steps, std::move(m), std::move(v));
  epoch_order_.clear();
}

RunLog Trainer::Run(std::ostream *echo) {
  const TrainConfig &t = cfg_.train;
  const std::filesystem::path dir(cfg_.data.out_dir);
  std::filesystem::create_directories(dir);
  SaveRunArtifacts(cfg_, data_);

  std::ofstream log(dir / "run.log", step_ == 0 ? std::ios::trunc : std::ios::app);
  if (!log) throw InputError("cannot write " + (dir / "run.log").string());
  auto emit = [&](const std::string &line) {
    log << line << "\n";
    log.flush();
    if (echo) *echo << line << std::endl;
  };

  if (step_ == 0)
    for (const std::string &n : data_.notes) {
      nlohmann::ordered_json j;
      j["event"] = "note";
      j["text"] = n;
      emit(j.dump());
    }

  RunLog run;
  while (step_ < t.max_steps) {
    StepRecord rec = TrainStep();
    if (rec.step % t.log_every == 0 || rec.step == 1 || rec.step == t.max_steps)
      emit(FormatStep(rec, t.log_wall_time));
    run.steps.push_back(std::move(rec));

    if (step_ % t.eval_every == 0 || step_ == t.max_steps) {
      EvalRecord ev = Evaluate();
      emit(FormatEval(ev, t.log_wall_time));
      const bool improved = ev.wer.defined && (best_wer_ < 0 || ev.wer.wer < best_wer_);
      if (improved) {
        best_wer_ = ev.wer.wer;
        WriteCheckpoint((dir / "best.ckpt").string(), MakeCheckpoint());
      }
      const bool stop = t.stop_wer >= 0 && ev.wer.defined && ev.wer.wer <= t.stop_wer;
      run.evals.push_back(std::move(ev));
      if (stop) break;
    }
  }
  WriteCheckpoint((dir / "last.ckpt").string(), MakeCheckpoint());
  return run;
}

std::string SaveRunArtifacts(const ExperimentConfig &cfg, const PreparedData &data) {
  const std::filesystem::path dir(cfg.data.out_dir);
  std::filesystem::create_directories(dir);
  for (const auto &[u, tok] : data.tokenizers)
    tok->SaveToFile((dir / TokenizerFileName(u)).string());
  const ExperimentConfig a = ArtifactConfig(cfg, data);
  const std::string text = ExperimentConfigText(a);
  WriteFileOrThrow(dir / "config.cfg", text);
  return text;
}

LoadedModel LoadModelCheckpoint(const std::string &path) {
  const Checkpoint ckpt = ReadCheckpoint(path);
  LoadedModel out;
  const std::string base = std::filesystem::path(path).parent_path().string();
  std::istringstream text(ckpt.config_text);
  out.cfg = ParseExperimentConfig(ConfigFile::Parse(text), base.empty() ? "." : base);
  const UnitSet u = out.cfg.model.pmu.trans_units;
  const std::string &tok_path = u == UnitSet::kPasm  ? out.cfg.data.pasm_model
                                : u == UnitSet::kBpe ? out.cfg.data.bpe_model
                                                     : out.cfg.data.bpe_small_model;
  if (tok_path.empty()) throw InputError(path + ": checkpoint config names no transducer tokenizer");
  out.trans_tokenizer = LoadTokenizer(tok_path);
  if (out.trans_tokenizer->vocab().size() != out.cfg.model.VocabSize(u))
    throw InputError(tok_path + ": vocabulary size does not match the checkpoint");
  out.model = std::make_unique<PmuModel>(out.cfg.model, out.cfg.train.seed);
  RestoreModel(ckpt, out.model.get());
  return out;
}

RunLog RunExperiment(const ExperimentConfig &cfg, std::ostream *echo,
                     const std::string &resume_from) {
  Trainer trainer(cfg);
  if (!resume_from.empty()) trainer.Resume(ReadCheckpoint(resume_from));
  return trainer.Run(echo);
}

}  // namespace pmu
