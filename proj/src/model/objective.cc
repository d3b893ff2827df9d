// src/model/objective.cc

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

#include "pmu/model/objective.h"

#include "pmu/core/error.h"
#include "pmu/core/ops.h"
#include "pmu/lattice/losses.h"

namespace pmu {

namespace {

double Need(const std::map<std::string, double> &l, const std::string &head) {
  auto it = l.find(head);
  PMU_INPUT_CHECK(it != l.end(), "objective: missing loss for CTC head '", head, "'");
  return it->second;
}

const std::vector<int> &NeedTarget(const UnitTargets &t, UnitSet u) {
  auto it = t.find(u);
  PMU_INPUT_CHECK(it != t.end(), "objective: missing '", UnitSetName(u), "' targets");
  return it->second;
}

}  // namespace

std::map<std::string, double> HeadWeights(const PmuConfig &pmu) {
  switch (pmu.variant) {
    case Variant::kBaseline:
    case Variant::kBasicPmu: return {{"ctc", 1.0}};
    case Variant::kParaCtc: return {{"pasm", pmu.alpha}, {"bpe", 1.0 - pmu.alpha}};
    case Variant::kPcaCtc:
      if (pmu.n2 == 0) return {{"n1", pmu.beta}, {"n3", 1.0 - pmu.beta}};
      return {{"n1", pmu.beta / 2}, {"n2", pmu.beta / 2}, {"n3", 1.0 - pmu.beta}};
  }
  return {};
}

double CtcTerm(const PmuConfig &pmu, const std::map<std::string, double> &l) {
  switch (pmu.variant) {
    case Variant::kBaseline:
    case Variant::kBasicPmu: return Need(l, "ctc");
    case Variant::kParaCtc: return pmu.alpha * Need(l, "pasm") + (1 - pmu.alpha) * Need(l, "bpe");
    case Variant::kPcaCtc:
      if (pmu.n2 == 0) return pmu.beta * Need(l, "n1") + (1 - pmu.beta) * Need(l, "n3");
      return pmu.beta / 2 * (Need(l, "n1") + Need(l, "n2")) + (1 - pmu.beta) * Need(l, "n3");
  }
  return 0;
}

double CombineObjective(const PmuConfig &pmu, double l_trans,
                        const std::map<std::string, double> &l_ctc) {
  return pmu.lambda_trans * l_trans + pmu.lambda_ctc * CtcTerm(pmu, l_ctc);
}

Var WeightedTotal(const PmuConfig &pmu, const Var &l_trans,
                  const std::map<std::string, Var> &l_ctc) {
  Var ctc_term;
  for (const auto &[head, weight] : HeadWeights(pmu)) {
    auto it = l_ctc.find(head);
    PMU_INPUT_CHECK(it != l_ctc.end(), "objective: missing loss for CTC head '", head, "'");
    Var term = Scale(it->second, static_cast<Real>(weight));
    ctc_term = ctc_term ? Add(ctc_term, term) : term;
  }
  return Add(Scale(l_trans, static_cast<Real>(pmu.lambda_trans)),
             Scale(ctc_term, static_cast<Real>(pmu.lambda_ctc)));
}

LossBundle AssembleObjective(const ForwardOutputs &out, const UnitTargets &targets,
                             const ModelConfig &cfg) {
  LossBundle b;
  const double w = cfg.label_smoothing;
  std::map<std::string, Var> l_ctc;
  for (const HeadSpec &h : ActiveHeads(cfg.pmu)) {
    const std::vector<int> &y = NeedTarget(targets, h.units);
    auto lp = out.enc.ctc_logprobs.find(h.name);
    PMU_CHECK(lp != out.enc.ctc_logprobs.end(), "objective: forward pass has no head ", h.name);
    LossStatus status = LossStatus::kOk;
    Var l = SmoothedCtcLoss(lp->second, y, w, &status);
    if (status != LossStatus::kOk) {
      b.skipped_samples = 1;
      return b;
    }
    b.l_ctc[h.name] = l->value[0];
    l_ctc[h.name] = l;
  }
  LossStatus status = LossStatus::kOk;
  Var l_trans = SmoothedTransducerLoss(out.lattice, NeedTarget(targets, cfg.pmu.trans_units), w,
                                       &status);
  if (status != LossStatus::kOk) {
    b.skipped_samples = 1;
    b.l_ctc.clear();
    return b;
  }
  b.l_trans = l_trans->value[0];
  b.l_ctc_term = CtcTerm(cfg.pmu, b.l_ctc);
  b.l_total = CombineObjective(cfg.pmu, b.l_trans, b.l_ctc);
  b.total = WeightedTotal(cfg.pmu, l_trans, l_ctc);
  return b;
}

}  // namespace pmu
