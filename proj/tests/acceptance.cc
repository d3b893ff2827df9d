// tests/acceptance.cc

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

// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pmu/core/grad_suite.h"
#include "pmu/lattice/loss_check.h"
#include "pmu/model/model_check.h"
#include "pmu/tokenizers/tokenizer_check.h"
#include "pmu/train/trainer.h"

using namespace pmu;

namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string Fmt(const char *fmt, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char *fmt, ...) {
  char buf[2048];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::filesystem::path Scratch(const std::string &name) {
  const auto dir = std::filesystem::temp_directory_path() / ("pmu_acceptance_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

Outcome OracleEquivalence() {
  const auto start = Clock::now();
  const int n = 400;
  const OracleReport ctc = CheckCtcOracle(n, 101);
  const OracleReport tr = CheckTransducerOracle(n, 202);
  const double secs = Since(start);
  const int reachable = ctc.instances - ctc.unreachable;
  Outcome o;
  o.pass = reachable >= 200 && tr.instances - tr.unreachable >= 200 && ctc.max_abs_diff <= 1e-9 &&
           tr.max_abs_diff <= 1e-9 && secs < 60;
  o.detail = Fmt(
      "ctc %d instances (%d with finite loss) max|dp-brute| %.2e; transducer %d instances max "
      "%.2e; tol 1e-9; %.1f s (limit 60 s)",
      ctc.instances, reachable, ctc.max_abs_diff, tr.instances, tr.max_abs_diff, secs);
  return o;
}

Outcome GradientSuite() {
  const auto start = Clock::now();
  const int seeds = 20;
  double prim = 0, ctc = 0, trans = 0, sc = 0, lstm = 0, model = 0;
  std::string prim_worst, model_worst;
  int prim_checks = 0, model_runs = 0;
  struct ModelCase {
    const char *name;
    ModelConfig cfg;
  };
  const std::vector<ModelCase> models = {
      {"baseline", TinyConfig(Variant::kBaseline)},
      {"basic_pmu", TinyConfig(Variant::kBasicPmu)},
      {"para_ctc", TinyConfig(Variant::kParaCtc)},
      {"pca_ctc n2=0", TinyConfig(Variant::kPcaCtc, 0)},
      {"pca_ctc-us", TinyConfig(Variant::kPcaCtc, 2, true, false)},
      {"pca_ctc-s", TinyConfig(Variant::kPcaCtc, 2, true, true)},
  };
  for (int s = 1; s <= seeds; ++s) {
    for (const GradCheck &g : CheckAllPrimitives(s)) {
      ++prim_checks;
      if (g.max_rel_error >= prim) {
        prim = g.max_rel_error;
        prim_worst = g.name;
      }
    }
    ctc = std::max(ctc, CheckCtcGradient(10, 1000 + s).max_rel_error);
    trans = std::max(trans, CheckTransducerGradient(10, 2000 + s).max_rel_error);
    sc = std::max(sc, CheckSelfConditionGradient(3000 + s).max_rel_error);
    lstm = std::max(lstm, CheckLabelEncoderGradient(4000 + s).max_rel_error);
    for (const ModelCase &m : models) {
      const GradCheckResult r = CheckModelGradient(m.cfg, 5000 + s, 4);
      ++model_runs;
      if (r.max_rel_error >= model) {
        model = r.max_rel_error;
        model_worst = std::string(m.name) + " " + r.worst;
      }
    }
  }
  const double secs = Since(start);
  const double tol = 1e-4;
  Outcome o;
  o.pass = std::max({prim, ctc, trans, sc, lstm, model}) <= tol && secs < 300;
  o.detail = Fmt(
      "%d seeds; max rel err: primitives %.1e (%d checks, worst %s), ctc %.1e, transducer %.1e, "
      "self-condition %.1e, label encoder %.1e, tiny model %.1e (%d runs, extrapolated central "
      "differences, worst %s); tol 1e-4, eps 1e-4, 64-bit; %.0f s (limit 300 s)",
      seeds, prim, prim_checks, prim_worst.c_str(), ctc, trans, sc, lstm, model, model_runs,
      model_worst.c_str(), secs);
  return o;
}

Outcome ObjectiveArithmetic() {
  double worst = 0;
  int tuples = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    const ArithmeticReport r = CheckObjectiveArithmetic(100, seed);
    worst = std::max(worst, r.max_abs_diff);
    tuples += r.tuples;
  }
  Outcome o;
  o.pass = tuples >= 100 && worst <= 1e-12;
  o.detail = Fmt("%d (variant, tuple) cases; max |assembled - formula| %.2e; tol 1e-12", tuples,
                 worst);
  return o;
}

Outcome StructuralLaws() {
  Outcome o;
  o.pass = true;
  std::string failures;
  int seeds = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed, ++seeds) {
    const StructureReport r = CheckStructure(seed);
    if (r.ok()) continue;
    o.pass = false;
    failures += Fmt(" seed %llu: shared=%d unshared=%d sc_zero=%d taps(n2=0)=%d taps(equal)=%d;",
                    static_cast<unsigned long long>(seed), r.shared_ids_equal,
                    r.unshared_ids_distinct, r.sc_zero_identity, r.taps_n2_zero,
                    r.taps_equal_split);
  }
  o.detail = Fmt("%d seeds: pca_ctc-s shares N1/N2 head and SC ids, pca_ctc-us shares none, "
                 "zero-init SC == SC off bit-for-bit, taps 2 (N2=0) and 3 (N1=N2=N3)",
                 seeds) +
             failures;
  return o;
}

struct ToyVariant {
  const char *name;
  Variant variant;
  int n1, n2, n3;
  bool sc;
};

const std::vector<ToyVariant> &ToyVariants() {
  static const std::vector<ToyVariant> v = {
      {"baseline", Variant::kBaseline, 2, 2, 2, true},
      {"basic_pmu", Variant::kBasicPmu, 2, 2, 2, true},
      {"para_ctc", Variant::kParaCtc, 2, 2, 2, true},
      {"pca_ctc+sc", Variant::kPcaCtc, 3, 0, 3, true},
      {"pca_ctc-sc", Variant::kPcaCtc, 3, 0, 3, false},
      {"pca_ctc+n2", Variant::kPcaCtc, 2, 2, 2, true},
  };
  return v;
}

Outcome ToyConvergence(const std::string &config_path, bool echo) {
  const ExperimentConfig base = LoadExperimentConfig(config_path);
  Outcome o;
  o.pass = true;
  std::string per;
  for (const ToyVariant &tv : ToyVariants()) {
    ExperimentConfig c = base;
    c.model.pmu.variant = tv.variant;
    c.model.pmu.n1 = tv.n1;
    c.model.pmu.n2 = tv.n2;
    c.model.pmu.n3 = tv.n3;
    c.model.pmu.sc_enabled = tv.sc;
    c.train.max_steps = 3000;
    // Only the model after the last step is scored; no checkpoint selection
    // on the held-out split.
    c.train.eval_every = c.train.max_steps;
    c.train.stop_wer = -1;
    c.train.log_to_stdout = false;
    c.data.out_dir = Scratch(std::string("toy_") + tv.name).string();
    const auto start = Clock::now();
    const RunLog log = RunExperiment(c);
    const double secs = Since(start);
    const EvalRecord &ev = log.evals.back();
    const bool ok = ev.wer.defined && ev.wer.wer <= 0.05 && ev.step <= 3000 && secs <= 900;
    o.pass = o.pass && ok;
    const std::string line = Fmt(" %s %.2f%% (%lld/%lld words) at step %lld, %.0f s;", tv.name,
                                 100 * ev.wer.wer, ev.wer.errors(), ev.wer.ref_words, ev.step, secs);
    per += line;
    if (echo) std::printf("  toy%s\n", line.c_str()), std::fflush(stdout);
  }
  o.detail = Fmt("word types %d, %d train / %d held-out utterances; WER of the final model, "
                 "limit 5%% within 3000 steps and 900 s per variant:",
                 base.toy.word_types, base.toy.train_utterances, base.toy.test_utterances) +
             per;
  return o;
}

Outcome TokenizerSuite() {
  Outcome o;
  const BpeSuiteReport bpe = CheckBpeSuite(1000, 300, 17);
  Lexicon toy;
  for (const auto &[word, phones] : ToyWordPool()) toy.Add(word, phones);
  int pasm_words = 0, pasm_fail = 0;
  for (int size : {0, 24, 40}) {
    const PasmLawReport r = CheckPasmConcatenation(toy, 10, size);
    pasm_words += r.words;
    pasm_fail += r.failures;
  }
  const EmReport em = CheckEmMonotonicity(10, 20, 23);
  o.pass = bpe.ok() && pasm_words > 0 && pasm_fail == 0 && em.ok();
  o.detail = Fmt(
      "bpe: %d fuzz words, deterministic=%d, round-trip failures %d; pasm: %zu-word toy lexicon "
      "x 3 sizes, %d/%d concatenation failures; EM: %d lexicons, worst likelihood decrease "
      "%.1e, worst row-sum error %.1e",
      bpe.words, bpe.deterministic, bpe.round_trip_failures, toy.entries.size(), pasm_fail,
      pasm_words, em.lexicons, em.worst_decrease, em.worst_row_error);
  return o;
}

Outcome Determinism(const std::string &config_path) {
  ExperimentConfig c = LoadExperimentConfig(config_path);
  c.train.max_steps = 200;
  c.train.eval_every = 100;
  c.train.log_to_stdout = false;
  std::vector<std::filesystem::path> dirs = {Scratch("det_a"), Scratch("det_b")};
  for (const auto &d : dirs) {
    c.data.out_dir = d.string();
    RunExperiment(c);
  }
  Outcome o;
  o.pass = true;
  int compared = 0;
  std::string diff;
  for (const auto &entry : std::filesystem::directory_iterator(dirs[0])) {
    const auto name = entry.path().filename();
    ++compared;
    if (ReadFile(entry.path()) != ReadFile(dirs[1] / name)) {
      o.pass = false;
      diff += " " + name.string();
    }
  }
  o.pass = o.pass && compared >= 4 && !ReadFile(dirs[0] / "run.log").empty();
  o.detail = Fmt("two 200-step runs of the desk config, seed %llu: %d artifacts compared "
                 "(run.log, checkpoints, tokenizers)",
                 static_cast<unsigned long long>(c.train.seed), compared) +
             (diff.empty() ? "; all byte-identical" : "; differing:" + diff);
  return o;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Acceptance criteria"};
  std::string config = std::string(PMU_SOURCE_DIR) + "/configs/desk-toy.cfg";
  std::vector<int> only;
  bool verbose = false;
  app.add_option("--config", config, "Desk toy config")->check(CLI::ExistingFile);
  app.add_option("--only", only, "Run only these criteria");
  app.add_flag("--verbose", verbose, "Print per-variant progress");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", OracleEquivalence},
      {"gradient suite", GradientSuite},
      {"objective arithmetic", ObjectiveArithmetic},
      {"structural laws", StructuralLaws},
      {"toy-task convergence", [&] { return ToyConvergence(config, verbose); }},
      {"tokenizer suite", TokenizerSuite},
      {"determinism", [&] { return Determinism(config); }},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
