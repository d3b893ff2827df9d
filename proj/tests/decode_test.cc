// tests/decode_test.cc

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

#include "doctest.h"
#include "pmu/core/error.h"
#include "pmu/decode/dataset.h"
#include "pmu/decode/decode.h"
#include "pmu/decode/features.h"
#include "pmu/decode/wer.h"
#include "pmu/model/model_check.h"

using namespace pmu;

namespace {

// Emission matrix whose frame-wise argmax is `path`.
Tensor PathEmissions(const std::vector<int> &path, int v) {
  Tensor e({static_cast<int>(path.size()), v}, -3.0);
  for (std::size_t t = 0; t < path.size(); ++t) e.at(static_cast<int>(t), path[t]) = -0.1;
  return e;
}

// Plays back a fixed argmax script: step k of the search sees script[k].
class ScriptScorer : public TransducerScorer {
 public:
  ScriptScorer(int frames, std::vector<int> script, int v)
      : frames_(frames), script_(std::move(script)), v_(v) {}
  int num_frames() const override { return frames_; }
  std::vector<double> LogProbs(int) override {
    std::vector<double> lp(v_, -5.0);
    const int best = step_ < script_.size() ? script_[step_] : 0;
    ++step_;
    lp[best] = -0.01;
    return lp;
  }
  void Advance(int label) override { advanced.push_back(label); }
  std::vector<int> advanced;

 private:
  int frames_;
  std::vector<int> script_;
  int v_;
  std::size_t step_ = 0;
};

class AlwaysEmit : public TransducerScorer {
 public:
  int num_frames() const override { return 4; }
  std::vector<double> LogProbs(int) override { return {-2.0, -0.1, -3.0}; }
  void Advance(int) override {}
};

}  // namespace

TEST_CASE("greedy ctc collapse") {
  CHECK(GreedyDecodeCtc(PathEmissions({1, 1, 0, 2}, 3)).ids == std::vector<int>{1, 2});
  CHECK(GreedyDecodeCtc(PathEmissions({1, 0, 1, 2}, 3)).ids == std::vector<int>{1, 1, 2});
  CHECK(GreedyDecodeCtc(PathEmissions({0, 0, 0}, 3)).ids.empty());
}

TEST_CASE("greedy ctc fuzz against direct rule") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(1, 12), sym(0, 3);
  for (int k = 0; k < 500; ++k) {
    std::vector<int> path(len(rng));
    for (int &p : path) p = sym(rng);
    std::vector<int> collapsed;
    for (std::size_t t = 0; t < path.size(); ++t)
      if (t == 0 || path[t] != path[t - 1]) collapsed.push_back(path[t]);
    std::vector<int> expected;
    for (int p : collapsed)
      if (p != 0) expected.push_back(p);
    const std::vector<int> got = GreedyDecodeCtc(PathEmissions(path, 4)).ids;
    CHECK(got == expected);
    for (int id : got) CHECK(id != 0);
  }
}

TEST_CASE("greedy transducer") {
  ScriptScorer blank(3, {0, 0, 0}, 3);
  CHECK(GreedyDecodeTransducer(blank).ids.empty());
  ScriptScorer one(1, {1, 0}, 3);
  CHECK(GreedyDecodeTransducer(one).ids == std::vector<int>{1});
  CHECK(one.advanced == std::vector<int>{1});
  AlwaysEmit greedy;
  CHECK(GreedyDecodeTransducer(greedy, 5).ids.size() == 20);
  CHECK(GreedyDecodeTransducer(greedy, 1).ids.size() == 4);
}

TEST_CASE("model-backed greedy decode terminates") {
  ModelConfig cfg = TinyConfig(Variant::kPcaCtc);
  PmuModel m(cfg, 1);
  ModelSample s = RandomSample(cfg, 9, 2);
  LabelSequence y = GreedyDecode(m, s.x, 3);
  CHECK(y.ids.size() <= static_cast<std::size_t>(SubsampledLength(9, 2) * 3));
  for (int id : y.ids) CHECK((id > 0 && id < cfg.bpe_vocab));
}

TEST_CASE("wer") {
  WerReport same = ComputeWer("a b c", "a b c");
  CHECK(same.wer == 0);
  WerReport sub = ComputeWer("a b c", "a x c");
  CHECK(sub.substitutions == 1);
  CHECK(sub.insertions == 0);
  CHECK(sub.deletions == 0);
  CHECK(sub.wer == doctest::Approx(1.0 / 3));
  WerReport del = ComputeWer("a b", "");
  CHECK(del.deletions == 2);
  CHECK(del.wer == 1.0);
  WerReport ins = ComputeWer("a", "x a y");
  CHECK(ins.insertions == 2);
  CHECK(ins.substitutions == 0);
  WerReport empty = ComputeWer("", "a");
  CHECK_FALSE(empty.defined);
  // one substitution is preferred over a deletion plus an insertion
  WerReport pref = ComputeWer("a b", "a c");
  CHECK(pref.substitutions == 1);
  CHECK(pref.errors() == 1);

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(0, 6), w(0, 3);
  for (int k = 0; k < 300; ++k) {
    std::string r, h;
    const int nr = len(rng) + 1, nh = len(rng);
    for (int i = 0; i < nr; ++i) r += std::string(1, static_cast<char>('a' + w(rng))) + " ";
    for (int i = 0; i < nh; ++i) h += std::string(1, static_cast<char>('a' + w(rng))) + " ";
    WerReport rep = ComputeWer(r, h);
    CHECK(rep.errors() <= std::max(nr, nh));
    CHECK(rep.errors() >= std::abs(nr - nh));
    CHECK(rep.ref_words - rep.deletions - rep.substitutions + rep.insertions + rep.substitutions == nh);
  }
  WerReport pooled = sub;
  pooled += del;
  CHECK(pooled.wer == doctest::Approx(3.0 / 5));
}

TEST_CASE("feature files") {
  Tensor f({2, 3}, {1.5f, -2.0f, 0.25f, 3.0f, 1e-3f, -7.0f});
  const std::string bytes = SerializeFeatures(f);
  CHECK(bytes.size() == 16 + 24);
  CHECK(ParseFeatures(bytes) == f);
  CHECK(ParseFeatures(bytes).shape() == Shape{2, 3});
  try {
    ParseFeatures(bytes.substr(0, 30));
    FAIL("expected FormatError");
  } catch (const FormatError &e) {
    CHECK(e.offset() == 30);
    CHECK(std::string(e.what()).find("expected 40 bytes") != std::string::npos);
  }
  try {
    ParseFeatures("PMUX" + bytes.substr(4));
    FAIL("expected FormatError");
  } catch (const FormatError &e) {
    CHECK(e.offset() == 0);
  }
  std::string v2 = bytes;
  v2[4] = 2;
  CHECK_THROWS_AS(ParseFeatures(v2), FormatError);
}

TEST_CASE("toy dataset") {
  ToySpec spec;
  spec.word_types = 3;
  spec.train_utterances = 20;
  spec.test_utterances = 5;
  ToyDataset a = SynthToyDataset(spec, 7), b = SynthToyDataset(spec, 7);
  REQUIRE(a.train.size() == 20);
  REQUIRE(a.test.size() == 5);
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    CHECK(a.train[i].features == b.train[i].features);
    CHECK(a.train[i].transcript == b.train[i].transcript);
  }
  CHECK(a.lexicon.entries.size() == 3);
  CHECK(a.lexicon.Find("she") != nullptr);

  ToySpec one = spec;
  one.word_types = 1;
  one.noise = 0;
  one.min_words = one.max_words = 1;
  one.stencil_rows = 1;
  ToyDataset c = SynthToyDataset(one, 2);
  for (const Utterance &u : c.train)
    for (int t = 0; t < u.features.dim(0); ++t)
      for (int d = 0; d < u.features.dim(1); ++d)
        CHECK(u.features.at(t, d) == c.train[0].features.at(0, d));

  ToySpec bad = spec;
  bad.max_frames = 2;
  CHECK_THROWS_AS(SynthToyDataset(bad, 1), InputError);
  bad = spec;
  bad.word_types = 13;
  CHECK_THROWS_AS(SynthToyDataset(bad, 1), InputError);
}

TEST_CASE("manifest round trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "pmu_decode_test";
  fs::remove_all(dir);
  ToySpec spec;
  spec.train_utterances = 4;
  spec.test_utterances = 0;
  ToyDataset d = SynthToyDataset(spec, 1);
  SaveDataset(d.train, dir.string(), "train.tsv");
  Dataset back = LoadManifest((dir / "train.tsv").string());
  REQUIRE(back.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(back[i].id == d.train[i].id);
    CHECK(back[i].transcript == d.train[i].transcript);
    CHECK(back[i].features == d.train[i].features);
  }
  {
    std::ofstream os(dir / "bad.tsv");
    os << "u1\tfeats/" << d.train[0].id << ".pmuf\t ,, \n";
  }
  CHECK_THROWS_AS(LoadManifest((dir / "bad.tsv").string()), InputError);
  fs::remove_all(dir);
}
