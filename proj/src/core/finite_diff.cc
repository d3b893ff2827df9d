// src/core/finite_diff.cc

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

#include "pmu/core/finite_diff.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace pmu {

namespace {

double Probe(const std::function<double()> &f, Real &slot, double eps) {
  const Real saved = slot;
  slot = static_cast<Real>(saved + eps);
  const double plus = f();
  slot = static_cast<Real>(saved - eps);
  const double minus = f();
  slot = saved;
  return (plus - minus) / (2 * eps);
}

}  // namespace

std::map<std::string, Tensor> FiniteDiffGrad(const std::function<double()> &f,
                                             ParamStore &params, double eps,
                                             int max_entries_per_param,
                                             std::uint64_t probe_seed, bool extrapolate) {
  NoGradGuard no_grad;
  std::map<std::string, Tensor> out;
  for (auto &[path, node] : params.Trainable()) {
    Tensor est(node->value.shape(), std::numeric_limits<Real>::quiet_NaN());
    std::vector<std::size_t> idx(node->value.size());
    std::iota(idx.begin(), idx.end(), 0);
    if (max_entries_per_param > 0 && idx.size() > static_cast<std::size_t>(max_entries_per_param)) {
      std::mt19937_64 rng(HashSeed(probe_seed, path));
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(max_entries_per_param);
    }
    for (std::size_t i : idx) {
      double d = Probe(f, node->value[i], eps);
      if (extrapolate) d = (4 * Probe(f, node->value[i], eps / 2) - d) / 3;
      est[i] = static_cast<Real>(d);
    }
    out.emplace(path, std::move(est));
  }
  return out;
}

std::vector<Tensor> FiniteDiffGrad(const std::function<double()> &f,
                                   const std::vector<Var> &leaves, double eps) {
  NoGradGuard no_grad;
  std::vector<Tensor> out;
  for (const Var &leaf : leaves) {
    Tensor est(leaf->value.shape(), 0);
    for (std::size_t i = 0; i < est.size(); ++i)
      est[i] = static_cast<Real>(Probe(f, leaf->value[i], eps));
    out.push_back(std::move(est));
  }
  return out;
}

double RelativeError(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

GradCheckResult CompareGrads(const std::map<std::string, Tensor> &numeric,
                             const ParamStore &params, double floor) {
  GradCheckResult r;
  for (const auto &[path, est] : numeric) {
    const Var &node = params.Get(path);
    for (std::size_t i = 0; i < est.size(); ++i) {
      if (std::isnan(est[i])) continue;
      const double a = node->has_grad() ? node->grad()[i] : 0.0;
      const double e = RelativeError(a, est[i], floor);
      ++r.checked;
      if (e > r.max_rel_error) {
        r.max_rel_error = e;
        r.worst = path + "[" + std::to_string(i) + "]";
      }
    }
  }
  return r;
}

}  // namespace pmu
