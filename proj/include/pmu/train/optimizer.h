// pmu/train/optimizer.h

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

#ifndef PMU_TRAIN_OPTIMIZER_H_
#define PMU_TRAIN_OPTIMIZER_H_

#include <map>
#include <string>

#include "pmu/core/param_store.h"
#include "pmu/core/tensor.h"

namespace pmu {

// base_lr * min(step^-0.5, step * warmup^-1.5), step >= 1.
double LrAt(long long step, double base_lr, long long warmup_steps);

// Global L2 norm of the trainable gradients.
double GradNorm(const ParamStore &params);
// Scales all trainable gradients so that their global norm is at most
// max_norm. Returns the norm before clipping.
double ClipGradNorm(ParamStore &params, double max_norm);

// Adaptive-moment update with bias correction.
class Adam {
 public:
  Adam(double beta1 = 0.9, double beta2 = 0.98, double eps = 1e-9)
      : beta1_(beta1), beta2_(beta2), eps_(eps) {}

  // Applies one update with learning rate lr using the current gradients.
  void Step(ParamStore &params, double lr);

  long long steps() const { return steps_; }
  // Moment tensors keyed by canonical parameter path.
  const std::map<std::string, Tensor> &first_moments() const { return m_; }
  const std::map<std::string, Tensor> &second_moments() const { return v_; }
  void Restore(long long steps, std::map<std::string, Tensor> m, std::map<std::string, Tensor> v);

 private:
  double beta1_, beta2_, eps_;
  long long steps_ = 0;
  std::map<std::string, Tensor> m_, v_;
};

}  // namespace pmu

#endif  // PMU_TRAIN_OPTIMIZER_H_
