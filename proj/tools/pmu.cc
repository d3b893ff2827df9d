// tools/pmu.cc

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

// pmu: command-line front end for tokenizers, training, decoding and scoring.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pmu/core/error.h"
#include "pmu/decode/dataset.h"
#include "pmu/decode/decode.h"
#include "pmu/decode/wer.h"
#include "pmu/lattice/loss_check.h"
#include "pmu/tokenizers/aligner.h"
#include "pmu/tokenizers/bpe.h"
#include "pmu/tokenizers/lexicon.h"
#include "pmu/tokenizers/pasm.h"
#include "pmu/tokenizers/text.h"
#include "pmu/train/trainer.h"

using namespace pmu;

namespace {

std::vector<std::string> ReadLines(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open " + path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(is, line);)
    if (!NormalizeText(line).empty()) lines.push_back(line);
  return lines;
}

void PrintJson(const nlohmann::ordered_json &j) { std::cout << j.dump() << std::endl; }

nlohmann::ordered_json WerJson(const WerReport &r) {
  nlohmann::ordered_json j;
  if (r.defined)
    j["wer"] = r.wer;
  else
    j["wer"] = nullptr;
  j["sub"] = r.substitutions;
  j["ins"] = r.insertions;
  j["del"] = r.deletions;
  j["ref_words"] = r.ref_words;
  return j;
}

// id -> transcript from a manifest, without reading the feature files.
std::vector<std::pair<std::string, std::string>> ManifestTranscripts(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open " + path);
  std::vector<std::pair<std::string, std::string>> out;
  int n = 0;
  for (std::string line; std::getline(is, line);) {
    ++n;
    if (line.empty()) continue;
    const auto a = line.find('\t');
    const auto b = a == std::string::npos ? a : line.find('\t', a + 1);
    if (b == std::string::npos)
      throw InputError(path + ":" + std::to_string(n) + ": expected id<TAB>path<TAB>transcript");
    out.emplace_back(line.substr(0, a), line.substr(b + 1));
  }
  return out;
}

struct TokenizeArgs {
  std::string corpus, lexicon, model, out, text;
  int merges = 100, size = 0, iters = 10, min_count = 1;
  bool stdin_input = false, units = false;
};

void TrainBpeCmd(const TokenizeArgs &a) {
  const BpeModel m = TrainBpe(ReadLines(a.corpus), a.merges);
  m.SaveToFile(a.out);
  PrintJson({{"units", m.vocab().size()}, {"merges", m.merges().size()}, {"out", a.out}});
}

void TrainPasmCmd(const TokenizeArgs &a) {
  const Lexicon lex = LoadLexicon(a.lexicon);
  std::vector<std::string> words;
  for (const std::string &l : ReadLines(a.corpus))
    for (std::string &w : SplitWords(NormalizeText(l))) words.push_back(std::move(w));
  const AlignmentTable table = AlignLexicon(lex, a.iters);
  const PasmResult r = ExtractPasm(table, lex, words, a.min_count, a.size);
  if (!r.warning.empty()) std::cerr << "warning: " << r.warning << "\n";
  r.model.SaveToFile(a.out);
  PrintJson({{"units", r.model.vocab().size()},
             {"status", r.status == PasmStatus::kOk ? "ok" : "char_fallback"},
             {"log_likelihood", table.log_likelihood},
             {"out", a.out}});
}

void EncodeCmd(const TokenizeArgs &a) {
  const std::unique_ptr<Tokenizer> tok = LoadTokenizer(a.model);
  auto encode = [&](const std::string &text) {
    const LabelSequence s = tok->Encode(text);
    std::ostringstream os;
    for (std::size_t i = 0; i < s.ids.size(); ++i) {
      if (i) os << ' ';
      if (a.units)
        os << tok->vocab().unit(s.ids[i]);
      else
        os << s.ids[i];
    }
    std::cout << os.str() << "\n";
  };
  if (!a.text.empty()) encode(a.text);
  if (a.stdin_input)
    for (std::string line; std::getline(std::cin, line);) encode(line);
}

void LossCheckCmd(int instances, std::uint64_t seed) {
  const OracleReport ctc = CheckCtcOracle(instances, seed);
  const OracleReport tr = CheckTransducerOracle(instances, seed + 1);
  const GradientReport gc = CheckCtcGradient(instances, seed + 2);
  const GradientReport gt = CheckTransducerGradient(instances, seed + 3);
  PrintJson({{"ctc_max_abs_diff", ctc.max_abs_diff},
             {"ctc_unreachable", ctc.unreachable},
             {"transducer_max_abs_diff", tr.max_abs_diff},
             {"ctc_grad_max_rel_error", gc.max_rel_error},
             {"transducer_grad_max_rel_error", gt.max_rel_error},
             {"instances", instances}});
  const bool ok = ctc.max_abs_diff <= 1e-9 && tr.max_abs_diff <= 1e-9 &&
                  gc.max_rel_error <= 1e-4 && gt.max_rel_error <= 1e-4;
  if (!ok) throw InputError("loss check failed");
}

void TrainCmd(const std::string &config, const std::string &resume) {
  const ExperimentConfig cfg = LoadExperimentConfig(config);
  RunExperiment(cfg, cfg.train.log_to_stdout ? &std::cout : nullptr, resume);
}

void DecodeCmd(const std::string &ckpt, const std::string &data, const std::string &out) {
  const LoadedModel m = LoadModelCheckpoint(ckpt);
  const Dataset set = LoadManifest(data);
  std::ofstream os(out);
  if (!os) throw InputError("cannot write " + out);
  for (const Utterance &u : set) {
    const LabelSequence hyp =
        GreedyDecode(*m.model, u.features, m.cfg.train.max_symbols_per_frame);
    os << u.id << '\t' << m.trans_tokenizer->Decode(hyp.ids) << '\n';
  }
  PrintJson({{"utterances", set.size()}, {"out", out}});
}

void EvalWerCmd(const std::string &ref, const std::string &hyp) {
  std::map<std::string, std::string> hyps;
  {
    std::ifstream is(hyp);
    if (!is) throw InputError("cannot open " + hyp);
    for (std::string line; std::getline(is, line);) {
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos)
        hyps[line] = "";
      else
        hyps[line.substr(0, tab)] = line.substr(tab + 1);
    }
  }
  WerReport total;
  int missing = 0, n = 0;
  for (const auto &[id, text] : ManifestTranscripts(ref)) {
    ++n;
    auto it = hyps.find(id);
    if (it == hyps.end()) ++missing;
    total += ComputeWer(NormalizeText(text),
                        it == hyps.end() ? std::string() : NormalizeText(it->second));
  }
  nlohmann::ordered_json j = WerJson(total);
  j["utterances"] = n;
  j["missing_hypotheses"] = missing;
  PrintJson(j);
}

void SynthCmd(const std::string &spec_path, std::uint64_t seed, const std::string &out) {
  const ConfigFile f = ConfigFile::Load(spec_path);
  ToySpec spec;
  ReadToySpec(f, &spec);
  // Other sections are allowed so a full experiment config can serve as spec.
  for (const std::string &k : f.Unconsumed())
    if (k.rfind("toy.", 0) == 0) throw InputError("unknown key " + k);
  const ToyDataset toy = SynthToyDataset(spec, seed);
  SaveDataset(toy.train, out, "train.tsv");
  SaveDataset(toy.test, out, "test.tsv");
  std::ofstream lex(std::filesystem::path(out) / "lexicon.txt");
  SaveLexicon(toy.lexicon, lex);
  PrintJson({{"train", toy.train.size()}, {"test", toy.test.size()},
             {"words", toy.words}, {"out", out}});
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"PMU toolkit: phonetic-assisted multi-target units for Conformer-Transducer"};
  app.require_subcommand(1);

  TokenizeArgs tk;
  CLI::App *tokenize = app.add_subcommand("tokenize", "Train or apply subword tokenizers");
  tokenize->require_subcommand(1);
  CLI::App *train_bpe = tokenize->add_subcommand("train-bpe", "Train a BPE model");
  train_bpe->add_option("--corpus", tk.corpus, "Text file, one sentence per line")->required();
  train_bpe->add_option("--merges", tk.merges, "Number of merges");
  train_bpe->add_option("--out", tk.out, "Output model")->required();
  CLI::App *train_pasm = tokenize->add_subcommand("train-pasm", "Extract PASM units");
  train_pasm->add_option("--corpus", tk.corpus, "Text file, one sentence per line")->required();
  train_pasm->add_option("--lexicon", tk.lexicon, "Pronunciation lexicon")->required();
  train_pasm->add_option("--size", tk.size, "Vocabulary size including specials (0: no limit)");
  train_pasm->add_option("--iters", tk.iters, "Aligner EM iterations");
  train_pasm->add_option("--min-count", tk.min_count, "Minimum corpus count of a unit");
  train_pasm->add_option("--out", tk.out, "Output model")->required();
  CLI::App *encode = tokenize->add_subcommand("encode", "Encode text to unit ids");
  encode->add_option("--model", tk.model, "Tokenizer model")->required();
  encode->add_option("--text", tk.text, "Text to encode");
  encode->add_flag("--stdin", tk.stdin_input, "Encode each line of stdin");
  encode->add_flag("--units", tk.units, "Print unit strings instead of ids");

  int instances = 200;
  std::uint64_t seed = 1;
  CLI::App *loss_check = app.add_subcommand("loss-check", "Compare both losses with brute force");
  loss_check->add_option("--instances", instances, "Random instances per loss");
  loss_check->add_option("--seed", seed, "Random seed");

  std::string config, resume;
  CLI::App *train = app.add_subcommand("train", "Train a model from a config file");
  train->add_option("--config", config, "Experiment config")->required()->check(CLI::ExistingFile);
  train->add_option("--resume", resume, "Checkpoint to resume from")->check(CLI::ExistingFile);

  std::string ckpt, data, out;
  CLI::App *decode = app.add_subcommand("decode", "Greedy transducer decoding");
  decode->add_option("--ckpt", ckpt, "Checkpoint")->required()->check(CLI::ExistingFile);
  decode->add_option("--data", data, "Manifest")->required()->check(CLI::ExistingFile);
  decode->add_option("--out", out, "Hypothesis file")->required();

  std::string ref, hyp;
  CLI::App *eval_wer = app.add_subcommand("eval-wer", "Score hypotheses against a manifest");
  eval_wer->add_option("--ref", ref, "Reference manifest")->required();
  eval_wer->add_option("--hyp", hyp, "Hypothesis file, id<TAB>text per line")->required();

  std::string spec;
  CLI::App *synth = app.add_subcommand("synth", "Write the synthetic toy task to disk");
  synth->add_option("--spec", spec, "Config file with a [toy] section")->required();
  synth->add_option("--seed", seed, "Random seed");
  synth->add_option("--out", out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_bpe) TrainBpeCmd(tk);
    if (*train_pasm) TrainPasmCmd(tk);
    if (*encode) EncodeCmd(tk);
    if (*loss_check) LossCheckCmd(instances, seed);
    if (*train) TrainCmd(config, resume);
    if (*decode) DecodeCmd(ckpt, data, out);
    if (*eval_wer) EvalWerCmd(ref, hyp);
    if (*synth) SynthCmd(spec, seed, out);
  } catch (const TrainingError &e) {
    std::cerr << "training error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
