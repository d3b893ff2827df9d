// pmu/core/finite_diff.h

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

#ifndef PMU_CORE_FINITE_DIFF_H_
#define PMU_CORE_FINITE_DIFF_H_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pmu/core/param_store.h"

namespace pmu {

// Central-difference estimate (f(w+eps) - f(w-eps)) / 2eps of a scalar
// function of the store's trainable parameters. `f` must be deterministic.
// When `max_entries_per_param` > 0 only that many entries per tensor are
// probed (chosen with `probe_seed`); the rest of the returned tensor is NaN.
// With `extrapolate`, central differences at eps and eps/2 are combined
// as (4 D(eps/2) - D(eps)) / 3, which cancels the eps^2 truncation term.
std::map<std::string, Tensor> FiniteDiffGrad(const std::function<double()> &f,
                                             ParamStore &params, double eps = 1e-4,
                                             int max_entries_per_param = 0,
                                             std::uint64_t probe_seed = 0,
                                             bool extrapolate = false);

// Same, over an explicit list of leaves.
std::vector<Tensor> FiniteDiffGrad(const std::function<double()> &f,
                                   const std::vector<Var> &leaves, double eps = 1e-4);

// |a - n| / max(|a|, |n|, floor). The floor keeps exact zeros comparable.
double RelativeError(double analytic, double numeric, double floor = 1e-7);

struct GradCheckResult {
  double max_rel_error = 0;
  std::string worst;  // "<param>[<index>]"
  int checked = 0;
};

// Compares leaf grads (already computed by the caller) against `numeric`,
// skipping NaN entries. `floor` is the denominator floor of RelativeError.
GradCheckResult CompareGrads(const std::map<std::string, Tensor> &numeric,
                             const ParamStore &params, double floor = 1e-7);

}  // namespace pmu

#endif  // PMU_CORE_FINITE_DIFF_H_
