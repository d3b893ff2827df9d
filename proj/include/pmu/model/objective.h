// pmu/model/objective.h

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

#ifndef PMU_MODEL_OBJECTIVE_H_
#define PMU_MODEL_OBJECTIVE_H_

#include <map>
#include <string>
#include <vector>

#include "pmu/core/autograd.h"
#include "pmu/model/config.h"
#include "pmu/model/model.h"

namespace pmu {

// Target ids of one utterance per unit inventory.
using UnitTargets = std::map<UnitSet, std::vector<int>>;

struct LossBundle {
  double l_trans = 0;
  std::map<std::string, double> l_ctc;  // per CTC head
  double l_ctc_term = 0;
  double l_total = 0;
  int skipped_samples = 0;
  Var total;  // differentiable total; null when the sample was skipped
};

// Weight of each head inside the CTC term.
std::map<std::string, double> HeadWeights(const PmuConfig &pmu);

// CTC term of the variant from per-head losses:
//   baseline, basic_pmu: L
//   para_ctc:            alpha L_pasm + (1 - alpha) L_bpe
//   pca_ctc, n2 == 0:    beta L_n1 + (1 - beta) L_n3
//   pca_ctc, n2 > 0:     beta/2 (L_n1 + L_n2) + (1 - beta) L_n3
// Throws InputError when a head's loss is missing.
double CtcTerm(const PmuConfig &pmu, const std::map<std::string, double> &l_ctc);
// lambda_trans L_trans + lambda_ctc CtcTerm.
double CombineObjective(const PmuConfig &pmu, double l_trans,
                        const std::map<std::string, double> &l_ctc);

// The same combination on the tape, using HeadWeights.
Var WeightedTotal(const PmuConfig &pmu, const Var &l_trans, const std::map<std::string, Var> &l_ctc);

// Per-utterance losses on the tape. A CTC target that cannot fit in the
// subsampled frames marks the sample as skipped (skipped_samples = 1,
// total = null). Missing targets for an active head throw InputError.
LossBundle AssembleObjective(const ForwardOutputs &out, const UnitTargets &targets,
                             const ModelConfig &cfg);

}  // namespace pmu

#endif  // PMU_MODEL_OBJECTIVE_H_
