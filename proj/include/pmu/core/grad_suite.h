// pmu/core/grad_suite.h

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

#ifndef PMU_CORE_GRAD_SUITE_H_
#define PMU_CORE_GRAD_SUITE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pmu/core/autograd.h"

namespace pmu {

struct GradCheck {
  std::string name;
  double max_rel_error = 0;
  int checked = 0;
};

// Checks d(sum(out * R))/d(leaves) of `build` against central differences,
// where R is a fixed random weighting of the output (so that outputs with a
// constant sum, e.g. softmax, still have a non-trivial gradient).
GradCheck CheckGradient(const std::string &name, std::vector<Var> leaves,
                        const std::function<Var(const std::vector<Var> &)> &build,
                        std::uint64_t seed, double eps = 1e-4);

// One check per registered primitive, with random shapes and inputs drawn
// from `seed`.
std::vector<GradCheck> CheckAllPrimitives(std::uint64_t seed, double eps = 1e-4);

}  // namespace pmu

#endif  // PMU_CORE_GRAD_SUITE_H_
