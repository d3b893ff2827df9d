// src/model/model_check.cc

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

#include "pmu/model/model_check.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "pmu/core/ops.h"
#include "pmu/model/model.h"

namespace pmu {

namespace {

Tensor RandomTensor(Shape shape, std::mt19937_64 &rng) {
  std::normal_distribution<double> dist(0, 1);
  Tensor t(std::move(shape), 0);
  for (Real &v : t.vec()) v = static_cast<Real>(dist(rng));
  return t;
}

std::set<UnitSet> UsedUnits(const ModelConfig &cfg) {
  std::set<UnitSet> used{cfg.pmu.trans_units};
  for (const HeadSpec &h : ActiveHeads(cfg.pmu)) used.insert(h.units);
  return used;
}

}  // namespace

ModelConfig TinyConfig(Variant variant, int n2, bool sc, bool shared) {
  ModelConfig cfg;
  cfg.feature_dim = 4;
  cfg.encoder.attention_dim = 16;
  cfg.encoder.ff_dim = 32;
  cfg.encoder.heads = 2;
  cfg.encoder.conv_kernel = 3;
  cfg.encoder.subsample_factor = 2;
  cfg.encoder.subsample_channels = 2;
  cfg.encoder.dropout = 0;
  cfg.label_dim = 8;
  cfg.joint_dim = 8;
  cfg.label_smoothing = 0.1;
  cfg.pasm_vocab = cfg.bpe_vocab = cfg.bpe_small_vocab = 6;
  cfg.pmu.variant = variant;
  cfg.pmu.n1 = 2;
  cfg.pmu.n2 = n2;
  cfg.pmu.n3 = 2;
  cfg.pmu.sc_enabled = sc;
  cfg.pmu.heads_shared = shared;
  cfg.encoder.num_layers = variant == Variant::kPcaCtc ? 4 + n2 : 2;
  return cfg;
}

ModelSample RandomSample(const ModelConfig &cfg, int frames, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ModelSample s{RandomTensor({frames, cfg.feature_dim}, rng), {}};
  const int t_sub = SubsampledLength(frames, cfg.encoder.subsample_factor);
  for (UnitSet u : UsedUnits(cfg)) {
    std::uniform_int_distribution<int> id(1, cfg.VocabSize(u) - 1);
    // Worst case every label repeats, which needs 2U - 1 frames.
    std::uniform_int_distribution<int> len(1, std::max(1, (t_sub + 1) / 2));
    std::vector<int> y(len(rng));
    for (int &v : y) v = id(rng);
    s.targets[u] = std::move(y);
  }
  return s;
}

GradCheckResult CheckModelGradient(const ModelConfig &cfg, std::uint64_t seed,
                                   int entries_per_param, double eps) {
  PmuModel model(cfg, seed);
  const ModelSample s = RandomSample(cfg, 8, seed + 1);
  const std::vector<int> &y = s.targets.at(cfg.pmu.trans_units);
  auto loss = [&]() {
    LossBundle b = AssembleObjective(model.Forward(s.x, y, nullptr), s.targets, cfg);
    return b.total;
  };
  model.params().ZeroGrad();
  Backward(loss());
  const auto numeric = FiniteDiffGrad([&]() { return static_cast<double>(loss()->value[0]); },
                                      model.params(), eps, entries_per_param, seed, true);
  return CompareGrads(numeric, model.params(), kModelGradFloor);
}

GradCheck CheckSelfConditionGradient(std::uint64_t seed, double eps) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(2, 5);
  const int t = dim(rng), d = dim(rng), v = dim(rng);
  std::vector<Var> leaves{Leaf(RandomTensor({t, d}, rng)), Leaf(RandomTensor({t, v}, rng)),
                          Leaf(RandomTensor({d, v}, rng))};
  return CheckGradient("self_condition", leaves,
                       [](const std::vector<Var> &l) {
                         return SelfCondition(l[0], Softmax(l[1]), l[2]);
                       },
                       seed, eps);
}

GradCheck CheckLabelEncoderGradient(std::uint64_t seed, double eps) {
  ModelConfig cfg = TinyConfig(Variant::kBaseline);
  PmuModel model(cfg, seed);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> id(1, cfg.bpe_vocab - 1);
  const std::vector<int> y{id(rng), id(rng), id(rng)};
  std::vector<Var> leaves;
  for (const char *p : {"dec/embed", "dec/lstm/w_ih", "dec/lstm/w_hh", "dec/lstm/b"})
    leaves.push_back(model.params().Get(p));
  return CheckGradient("label_encoder", leaves,
                       [&](const std::vector<Var> &) { return model.LabelEncode(y); }, seed, eps);
}

ArithmeticReport CheckObjectiveArithmetic(int tuples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0, 1), open(0.01, 0.99), loss(0, 20);
  ArithmeticReport r;
  const std::vector<std::pair<Variant, int>> cases{{Variant::kBaseline, 0},
                                                   {Variant::kBasicPmu, 0},
                                                   {Variant::kParaCtc, 0},
                                                   {Variant::kPcaCtc, 0},
                                                   {Variant::kPcaCtc, 2}};
  for (const auto &[variant, n2] : cases) {
    for (int k = 0; k < tuples; ++k) {
      PmuConfig p;
      p.variant = variant;
      p.n2 = n2;
      p.lambda_trans = unit(rng);
      p.lambda_ctc = unit(rng);
      p.alpha = open(rng);
      p.beta = open(rng);
      const double lt = loss(rng), l1 = loss(rng), l2 = loss(rng), l3 = loss(rng);
      std::map<std::string, double> comp;
      double ctc = 0;
      switch (variant) {
        case Variant::kBaseline:
        case Variant::kBasicPmu:
          comp = {{"ctc", l1}};
          ctc = l1;
          break;
        case Variant::kParaCtc:
          comp = {{"pasm", l1}, {"bpe", l2}};
          ctc = p.alpha * l1 + (1 - p.alpha) * l2;
          break;
        case Variant::kPcaCtc:
          if (n2 == 0) {
            comp = {{"n1", l1}, {"n3", l3}};
            ctc = p.beta * l1 + (1 - p.beta) * l3;
          } else {
            comp = {{"n1", l1}, {"n2", l2}, {"n3", l3}};
            ctc = (p.beta / 2) * (l1 + l2) + (1 - p.beta) * l3;
          }
          break;
      }
      const double expected = p.lambda_trans * lt + p.lambda_ctc * ctc;
      std::map<std::string, Var> vars;
      for (const auto &[name, v] : comp) vars[name] = Constant(Tensor::Scalar(static_cast<Real>(v)));
      const double tape =
          WeightedTotal(p, Constant(Tensor::Scalar(static_cast<Real>(lt))), vars)->value[0];
      r.max_abs_diff = std::max({r.max_abs_diff, std::abs(CombineObjective(p, lt, comp) - expected),
                                 std::abs(tape - expected)});
      ++r.tuples;
    }
  }
  return r;
}

StructureReport CheckStructure(std::uint64_t seed) {
  StructureReport r;
  {
    PmuModel m(TinyConfig(Variant::kPcaCtc, 2, true, true), seed);
    const ParamStore &ps = m.params();
    r.shared_ids_equal = ps.Get("ctc/n1/w")->id == ps.Get("ctc/n2/w")->id &&
                         ps.Get("ctc/n1/b")->id == ps.Get("ctc/n2/b")->id &&
                         ps.Get("sc/n1/w")->id == ps.Get("sc/n2/w")->id;
  }
  {
    PmuModel m(TinyConfig(Variant::kPcaCtc, 2, true, false), seed);
    std::set<std::int64_t> ids;
    std::size_t n = 0;
    for (const std::string &p : m.params().Paths()) {
      ids.insert(m.params().Get(p)->id);
      ++n;
    }
    r.unshared_ids_distinct = ids.size() == n;
  }
  {
    ModelConfig with_sc = TinyConfig(Variant::kPcaCtc, 2, true, false);
    with_sc.encoder.dropout = 0.1;
    ModelConfig without_sc = with_sc;
    without_sc.pmu.sc_enabled = false;
    PmuModel a(with_sc, seed), b(without_sc, seed);
    for (const char *p : {"sc/n1/w", "sc/n2/w"}) a.params().Get(p)->value.Fill(0);
    const ModelSample s = RandomSample(with_sc, 8, seed);
    const std::vector<int> &y = s.targets.at(with_sc.pmu.trans_units);
    std::mt19937_64 rng_a(seed + 7), rng_b(seed + 7);
    ForwardOutputs fa = a.Forward(s.x, y, &rng_a), fb = b.Forward(s.x, y, &rng_b);
    r.sc_zero_identity = fa.enc.h_n3->value == fb.enc.h_n3->value &&
                         fa.lattice->value == fb.lattice->value;
  }
  {
    ModelConfig cfg = TinyConfig(Variant::kPcaCtc, 0);
    PmuModel m(cfg, seed);
    r.taps_n2_zero = m.Encode(RandomSample(cfg, 8, seed).x, nullptr).num_taps;
  }
  {
    ModelConfig cfg = TinyConfig(Variant::kPcaCtc, 2);
    PmuModel m(cfg, seed);
    r.taps_equal_split = m.Encode(RandomSample(cfg, 8, seed).x, nullptr).num_taps;
  }
  return r;
}

}  // namespace pmu
