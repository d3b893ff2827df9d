// tests/model_test.cc

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
#include <cstdio>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pmu/core/error.h"
#include "pmu/model/checkpoint.h"
#include "pmu/model/model.h"
#include "pmu/model/model_check.h"
#include "pmu/model/objective.h"

using namespace pmu;

namespace {

std::vector<Real> Row(const Tensor &t, int r) {
  auto s = t.row(r);
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("subsampled length") {
  for (int t = 1; t <= 40; ++t) {
    CHECK(SubsampledLength(t, 4) == (t + 3) / 4);
    CHECK(SubsampledLength(t, 2) == (t + 1) / 2);
    CHECK(SubsampledLength(t, 1) == t);
  }
}

TEST_CASE("encoder output shape") {
  for (int factor : {1, 2, 4}) {
    ModelConfig cfg = TinyConfig(Variant::kBaseline);
    cfg.encoder.num_layers = 1;
    cfg.encoder.subsample_factor = factor;
    PmuModel m(cfg, 3);
    for (int t : {1, 5, 8, 13}) {
      Tensor x({t, cfg.feature_dim}, 0.5);
      EncoderOutputs e = m.Encode(x, nullptr);
      CHECK(e.h_n3->value.shape() == Shape{SubsampledLength(t, factor), 16});
      CHECK(e.h_n1 == nullptr);
      CHECK(e.num_taps == 1);
    }
  }
}

TEST_CASE("ctc heads are normalized") {
  ModelConfig cfg = TinyConfig(Variant::kParaCtc);
  PmuModel m(cfg, 1);
  EncoderOutputs e = m.Encode(RandomSample(cfg, 8, 2).x, nullptr);
  REQUIRE(e.ctc_logprobs.size() == 2);
  for (const auto &[name, lp] : e.ctc_logprobs)
    for (int t = 0; t < lp->value.dim(0); ++t) {
      double s = 0;
      for (int v = 0; v < lp->value.dim(1); ++v) s += std::exp(lp->value.at(t, v));
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("pca taps") {
  ModelConfig two = TinyConfig(Variant::kPcaCtc, 0);
  PmuModel a(two, 1);
  EncoderOutputs ea = a.Encode(RandomSample(two, 8, 2).x, nullptr);
  CHECK(ea.num_taps == 2);
  CHECK(ea.h_n2 == nullptr);
  CHECK(ea.ctc_logprobs.count("n1") == 1);
  CHECK(ea.ctc_logprobs.count("n3") == 1);

  ModelConfig three = TinyConfig(Variant::kPcaCtc, 2);
  PmuModel b(three, 1);
  EncoderOutputs eb = b.Encode(RandomSample(three, 8, 2).x, nullptr);
  CHECK(eb.num_taps == 3);
  CHECK(eb.h_n2 != nullptr);

  // full-size split: 12 layers in three groups of 4
  ModelConfig big = three;
  big.encoder.num_layers = 12;
  big.pmu.n1 = big.pmu.n2 = big.pmu.n3 = 4;
  PmuModel c(big, 1);
  CHECK(c.Encode(RandomSample(big, 8, 2).x, nullptr).num_taps == 3);
}

TEST_CASE("structural laws") {
  StructureReport r = CheckStructure(5);
  CHECK(r.shared_ids_equal);
  CHECK(r.unshared_ids_distinct);
  CHECK(r.sc_zero_identity);
  CHECK(r.taps_n2_zero == 2);
  CHECK(r.taps_equal_split == 3);
}

TEST_CASE("shared heads need equal vocab sizes") {
  ModelConfig cfg = TinyConfig(Variant::kPcaCtc, 2, true, true);
  cfg.bpe_small_vocab = 7;
  CHECK_THROWS_AS(cfg.Validate(), InputError);
  cfg.pmu.heads_shared = false;
  CHECK_NOTHROW(cfg.Validate());
}

TEST_CASE("config validation lists problems") {
  ModelConfig cfg = TinyConfig(Variant::kPcaCtc, 2);
  cfg.pmu.n3 = 5;
  cfg.encoder.heads = 3;
  try {
    cfg.Validate();
    FAIL("expected InputError");
  } catch (const InputError &e) {
    const std::string msg = e.what();
    CHECK(msg.find("n1 + n2 + n3") != std::string::npos);
    CHECK(msg.find("heads") != std::string::npos);
  }
}

TEST_CASE("config text round trip") {
  ModelConfig cfg = TinyConfig(Variant::kParaCtc);
  cfg.pmu.alpha = 0.7;
  std::stringstream ss;
  WriteModelConfig(ss, cfg);
  ConfigFile f = ConfigFile::Parse(ss);
  ModelConfig back;
  ReadModelConfig(f, &back);
  CHECK(f.Unconsumed().empty());
  std::stringstream again;
  WriteModelConfig(again, back);
  CHECK(again.str() == ss.str());
  CHECK(back.pmu.alpha == 0.7);
}

TEST_CASE("self condition") {
  Var h = Leaf(Tensor({3, 2}, {1, 2, 3, 4, 5, 6}));
  Var post = Constant(Tensor({3, 4}, 0.25));
  Var zero = Leaf(Tensor({2, 4}, 0));
  CHECK(SelfCondition(h, post, zero)->value == h->value);
  Var w = Leaf(Tensor({2, 4}, {1, 2, 3, 4, -1, 0, 1, 0}));
  Tensor out = SelfCondition(h, post, w)->value;
  for (int t = 0; t < 3; ++t) {
    CHECK(out.at(t, 0) - h->value.at(t, 0) == doctest::Approx(2.5));
    CHECK(out.at(t, 1) - h->value.at(t, 1) == doctest::Approx(0.0));
  }
  CHECK_THROWS_AS(SelfCondition(h, post, Leaf(Tensor({2, 3}, 0))), ContractError);
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    CHECK(CheckSelfConditionGradient(seed).max_rel_error <= 1e-5);
}

TEST_CASE("label encoder") {
  ModelConfig cfg = TinyConfig(Variant::kBaseline);
  PmuModel m(cfg, 4);
  CHECK(m.LabelEncode({})->value.shape() == Shape{1, cfg.label_dim});
  const std::vector<int> a{2, 3, 4}, b{2, 5, 4};
  Tensor ha = m.LabelEncode(a)->value, hb = m.LabelEncode(b)->value;
  REQUIRE(ha.dim(0) == 4);
  for (int u = 0; u < 2; ++u) CHECK(Row(ha, u) == Row(hb, u));
  CHECK(Row(ha, 2) != Row(hb, 2));
  // incremental path gives the same rows
  LstmState s = m.LabelStart();
  CHECK(s.h->value.vec() == Row(ha, 0));
  s = m.LabelStep(s, 2);
  CHECK(s.h->value.vec() == Row(ha, 1));
  CHECK_THROWS_AS(m.LabelEncode(std::vector<int>{6}), ContractError);
  for (std::uint64_t seed = 0; seed < 3; ++seed)
    CHECK(CheckLabelEncoderGradient(seed).max_rel_error <= 1e-5);
}

TEST_CASE("joint") {
  ModelConfig cfg = TinyConfig(Variant::kBaseline);
  PmuModel m(cfg, 6);
  Var lat = m.Joint(Constant(Tensor({3, 16}, 0)), Constant(Tensor({2, 8}, 0)));
  CHECK(lat->value.shape() == Shape{3, 2, 6});
  for (Real v : lat->value.vec()) CHECK(v == doctest::Approx(-std::log(6.0)).epsilon(1e-14));

  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  Tensor ht({3, 16}, 0), hu({2, 8}, 0);
  for (Real &v : ht.vec()) v = n(rng);
  for (Real &v : hu.vec()) v = n(rng);
  Tensor swapped = ht;
  for (int c = 0; c < 16; ++c) std::swap(swapped.at(0, c), swapped.at(2, c));
  Tensor a = m.Joint(Constant(ht), Constant(hu))->value;
  Tensor b = m.Joint(Constant(swapped), Constant(hu))->value;
  const int slice = 2 * 6;
  for (int i = 0; i < slice; ++i) {
    CHECK(a[0 * slice + i] == b[2 * slice + i]);
    CHECK(a[1 * slice + i] == b[1 * slice + i]);
  }
  // single-step path agrees with the full lattice
  Var proj = m.JointEncoderProjection(Constant(ht));
  Var hu_var = Constant(hu);
  Tensor step = m.JointStep(SliceRows(proj, 1, 1), SliceRows(hu_var, 1, 1))->value;
  for (int v = 0; v < 6; ++v)
    CHECK(step[v] == doctest::Approx(a[(1 * 2 + 1) * 6 + v]).epsilon(1e-13));
}

TEST_CASE("objective arithmetic") {
  PmuConfig p;
  p.variant = Variant::kParaCtc;
  p.alpha = 0.7;
  CHECK(CtcTerm(p, {{"pasm", 2.0}, {"bpe", 1.0}}) == doctest::Approx(1.7).epsilon(1e-15));
  p.variant = Variant::kPcaCtc;
  p.beta = 0.5;
  p.n2 = 4;
  CHECK(CtcTerm(p, {{"n1", 4.0}, {"n2", 2.0}, {"n3", 2.0}}) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK_THROWS_AS(CtcTerm(p, {{"n1", 4.0}, {"n3", 2.0}}), InputError);
  ArithmeticReport r = CheckObjectiveArithmetic(100, 9);
  CHECK(r.tuples == 500);
  CHECK(r.max_abs_diff <= 1e-12);
}

TEST_CASE("assembled objective matches its components") {
  for (Variant v : {Variant::kBaseline, Variant::kBasicPmu, Variant::kParaCtc, Variant::kPcaCtc}) {
    ModelConfig cfg = TinyConfig(v);
    PmuModel m(cfg, 2);
    ModelSample s = RandomSample(cfg, 8, 3);
    ForwardOutputs out = m.Forward(s.x, s.targets.at(cfg.pmu.trans_units), nullptr);
    LossBundle b = AssembleObjective(out, s.targets, cfg);
    REQUIRE(b.total != nullptr);
    CHECK(b.skipped_samples == 0);
    CHECK(std::abs(b.total->value[0] - b.l_total) <= 1e-12);
    CHECK(b.l_ctc.size() == ActiveHeads(cfg.pmu).size());
    UnitTargets missing = s.targets;
    missing.erase(cfg.pmu.trans_units);
    CHECK_THROWS_AS(AssembleObjective(out, missing, cfg), InputError);
  }
}

TEST_CASE("unreachable ctc target skips the sample") {
  ModelConfig cfg = TinyConfig(Variant::kBasicPmu);
  PmuModel m(cfg, 2);
  ModelSample s = RandomSample(cfg, 2, 3);
  s.targets[UnitSet::kPasm] = {2, 2, 3};
  ForwardOutputs out = m.Forward(s.x, s.targets.at(cfg.pmu.trans_units), nullptr);
  LossBundle b = AssembleObjective(out, s.targets, cfg);
  CHECK(b.skipped_samples == 1);
  CHECK(b.total == nullptr);
}

TEST_CASE("full model gradient") {
  struct Case {
    Variant v;
    int n2;
    bool sc, shared;
  };
  for (Case c : {Case{Variant::kBaseline, 0, false, false}, Case{Variant::kParaCtc, 0, false, false},
                 Case{Variant::kPcaCtc, 2, true, true}, Case{Variant::kPcaCtc, 0, true, false}}) {
    GradCheckResult r = CheckModelGradient(TinyConfig(c.v, c.n2, c.sc, c.shared), 11, 3);
    INFO(VariantName(c.v), " worst ", r.worst);
    CHECK(r.checked > 100);
    CHECK(r.max_rel_error <= 1e-4);
  }
}

TEST_CASE("checkpoint round trip") {
  ModelConfig cfg = TinyConfig(Variant::kPcaCtc, 2, true, true);
  PmuModel a(cfg, 1), b(cfg, 2);
  Checkpoint ck;
  ck.config_text = "[model]\n";
  AddModelRecords(a, &ck);
  CHECK(ck.records.count("param/ctc/n2/w") == 0);
  const std::string bytes = SerializeCheckpoint(ck);
  CHECK(bytes.substr(0, 4) == "PMU1");
  Checkpoint back = ParseCheckpoint(bytes);
  CHECK(back.config_text == ck.config_text);
  RestoreModel(back, &b);
  for (const std::string &p : a.params().Paths())
    CHECK(a.params().Get(p)->value == b.params().Get(p)->value);
  CHECK(b.params().Get("ctc/n2/w") == b.params().Get("ctc/n1/w"));

  try {
    ParseCheckpoint(bytes.substr(0, bytes.size() - 3));
    FAIL("expected FormatError");
  } catch (const FormatError &e) {
    CHECK(e.offset() == static_cast<long long>(bytes.size() - 8));
  }
  CHECK_THROWS_AS(ParseCheckpoint("PMU2" + bytes.substr(4)), FormatError);

  ModelConfig other = cfg;
  other.joint_dim = 9;
  PmuModel c(other, 1);
  CHECK_THROWS_AS(RestoreModel(back, &c), InputError);
}
