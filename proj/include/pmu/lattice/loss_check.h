// pmu/lattice/loss_check.h

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

#ifndef PMU_LATTICE_LOSS_CHECK_H_
#define PMU_LATTICE_LOSS_CHECK_H_

#include <cstdint>
#include <random>
#include <vector>

#include "pmu/core/tensor.h"

namespace pmu {

// Random instance within the oracle limits (T <= 4, U <= 3, V <= 4).
struct LossInstance {
  Tensor logprobs;  // [T x V] for CTC, [T x (U+1) x V] for the transducer
  std::vector<int> labels;
};

LossInstance RandomCtcInstance(std::mt19937_64 &rng);
LossInstance RandomTransducerInstance(std::mt19937_64 &rng);

struct OracleReport {
  int instances = 0;
  int unreachable = 0;
  double max_abs_diff = 0;
};

// Dynamic-programming loss vs exhaustive enumeration.
OracleReport CheckCtcOracle(int instances, std::uint64_t seed);
OracleReport CheckTransducerOracle(int instances, std::uint64_t seed);

struct GradientReport {
  int instances = 0;
  int checked = 0;
  double max_rel_error = 0;
};

// Analytic loss gradient w.r.t. the log-probabilities vs central differences.
GradientReport CheckCtcGradient(int instances, std::uint64_t seed, double eps = 1e-4);
GradientReport CheckTransducerGradient(int instances, std::uint64_t seed, double eps = 1e-4);

}  // namespace pmu

#endif  // PMU_LATTICE_LOSS_CHECK_H_
