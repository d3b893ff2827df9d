// src/train/optimizer.cc

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

#include "pmu/train/optimizer.h"

#include <algorithm>
#include <cmath>

#include "pmu/core/error.h"

namespace pmu {

double LrAt(long long step, double base_lr, long long warmup_steps) {
  PMU_CHECK(step >= 1, "lr_at: step must be >= 1, got ", step);
  PMU_CHECK(warmup_steps >= 1, "lr_at: warmup must be >= 1");
  const double s = static_cast<double>(step), w = static_cast<double>(warmup_steps);
  return base_lr * std::min(1.0 / std::sqrt(s), s * std::pow(w, -1.5));
}

double GradNorm(const ParamStore &params) {
  double sq = 0;
  for (const auto &[path, var] : params.Trainable()) {
    if (!var->has_grad()) continue;
    for (Real g : var->grad().vec()) sq += static_cast<double>(g) * g;
  }
  return std::sqrt(sq);
}

double ClipGradNorm(ParamStore &params, double max_norm) {
  PMU_CHECK(max_norm > 0, "clip: max_norm must be positive");
  const double norm = GradNorm(params);
  if (norm > max_norm) {
    const Real scale = static_cast<Real>(max_norm / norm);
    for (const auto &[path, var] : params.Trainable())
      if (var->has_grad())
        for (Real &g : var->grad().vec()) g *= scale;
  }
  return norm;
}

void Adam::Step(ParamStore &params, double lr) {
  ++steps_;
  const double c1 = 1 - std::pow(beta1_, static_cast<double>(steps_));
  const double c2 = 1 - std::pow(beta2_, static_cast<double>(steps_));
  for (const auto &[path, var] : params.Trainable()) {
    Tensor &p = var->value;
    auto mi = m_.try_emplace(path, p.shape(), 0).first;
    auto vi = v_.try_emplace(path, p.shape(), 0).first;
    Real *m = mi->second.ptr();
    Real *v = vi->second.ptr();
    const bool has = var->has_grad();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double g = has ? var->grad()[i] : 0.0;
      m[i] = static_cast<Real>(beta1_ * m[i] + (1 - beta1_) * g);
      v[i] = static_cast<Real>(beta2_ * v[i] + (1 - beta2_) * g * g);
      const double update = (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_);
      p[i] = static_cast<Real>(p[i] - lr * update);
    }
  }
}

void Adam::Restore(long long steps, std::map<std::string, Tensor> m,
                   std::map<std::string, Tensor> v) {
  steps_ = steps;
  m_ = std::move(m);
  v_ = std::move(v);
}

}  // namespace pmu
