// pmu/model/model_check.h

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

#ifndef PMU_MODEL_MODEL_CHECK_H_
#define PMU_MODEL_MODEL_CHECK_H_

#include <cstdint>
#include <string>

#include "pmu/core/finite_diff.h"
#include "pmu/core/grad_suite.h"
#include "pmu/model/config.h"
#include "pmu/model/objective.h"

namespace pmu {

// Small configuration for exhaustive checks: 2 layers per group, d = 16,
// vocabularies of 6 units, no dropout, subsampling by 2.
ModelConfig TinyConfig(Variant variant, int n2 = 2, bool sc = true, bool shared = false);

// Random features (frames x feature_dim) and targets for every unit set the
// config uses; target lengths fit the subsampled frame count.
struct ModelSample {
  Tensor x;
  UnitTargets targets;
};
ModelSample RandomSample(const ModelConfig &cfg, int frames, std::uint64_t seed);

// Denominator floor for model-level relative errors. Entries smaller than
// this are compared in absolute terms (|a - n| <= floor * tolerance), since
// loss round-off at eps = 1e-4 is around 3e-11.
inline constexpr double kModelGradFloor = 1e-6;

// Full objective gradient of a freshly initialized model against
// extrapolated central differences, probing up to `entries_per_param`
// entries of every tensor.
GradCheckResult CheckModelGradient(const ModelConfig &cfg, std::uint64_t seed,
                                   int entries_per_param = 4, double eps = 1e-4);

// Gradient of a scalar read-out of self_condition w.r.t. h, the logits
// feeding the posterior, and the projection.
GradCheck CheckSelfConditionGradient(std::uint64_t seed, double eps = 1e-4);

// Gradient through the label encoder for a U = 3 prefix.
GradCheck CheckLabelEncoderGradient(std::uint64_t seed, double eps = 1e-4);

struct ArithmeticReport {
  int tuples = 0;
  double max_abs_diff = 0;
};
// Random component losses for every variant (pca_ctc with and without N2);
// compares AssembleObjective-style totals against the formulas written out
// directly here.
ArithmeticReport CheckObjectiveArithmetic(int tuples, std::uint64_t seed);

struct StructureReport {
  bool shared_ids_equal = false;      // pcaCTC-s: N1/N2 head and SC ids identical
  bool unshared_ids_distinct = false; // pcaCTC-us: all ids distinct
  bool sc_zero_identity = false;      // zero SC projection == SC disabled, bit for bit
  int taps_n2_zero = 0;
  int taps_equal_split = 0;
  bool ok() const {
    return shared_ids_equal && unshared_ids_distinct && sc_zero_identity && taps_n2_zero == 2 &&
           taps_equal_split == 3;
  }
};
StructureReport CheckStructure(std::uint64_t seed);

}  // namespace pmu

#endif  // PMU_MODEL_MODEL_CHECK_H_
