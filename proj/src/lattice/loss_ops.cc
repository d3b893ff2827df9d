// src/lattice/loss_ops.cc

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

#include <cmath>
#include <memory>
#include <vector>

#include "pmu/core/error.h"
#include "pmu/core/ops.h"
#include "pmu/lattice/losses.h"

namespace pmu {

namespace {

Var WrapLoss(const Var &input, LossResult res, const char *op, LossStatus *status) {
  if (status) *status = res.status;
  auto grad = std::make_shared<Tensor>(std::move(res.grad));
  return MakeNode(Tensor::Scalar(static_cast<Real>(res.value)), op, {input},
                  [grad](Node &self) {
                    Node &in = *self.parents[0];
                    const Real g = self.grad()[0];
                    Real *dst = in.grad().ptr();
                    for (std::size_t i = 0; i < grad->size(); ++i) dst[i] += g * (*grad)[i];
                  });
}

// w * path_len * mean over positions of mean_v(-log p), as a tape expression.
Var UniformTerm(const Var &logprobs, double positions, double path_len) {
  const double vocab = logprobs->value.shape().back();
  return Scale(Sum(logprobs), static_cast<Real>(-path_len / (positions * vocab)));
}

Var Smooth(const Var &loss, const Var &uniform, double weight) {
  PMU_CHECK(weight >= 0 && weight < 1, "label smoothing weight ", weight, " outside [0, 1)");
  if (weight == 0) return loss;
  return Add(Scale(loss, static_cast<Real>(1 - weight)), Scale(uniform, static_cast<Real>(weight)));
}

}  // namespace

Var CtcLossOp(const Var &logprobs, std::span<const int> labels, LossStatus *status) {
  return WrapLoss(logprobs, CtcLoss(logprobs->value, labels), "ctc_loss", status);
}

Var TransducerLossOp(const Var &lattice, std::span<const int> labels, LossStatus *status) {
  return WrapLoss(lattice, TransducerLoss(lattice->value, labels), "transducer_loss", status);
}

Var SmoothedCtcLoss(const Var &logprobs, std::span<const int> labels, double weight,
                    LossStatus *status) {
  Var loss = CtcLossOp(logprobs, labels, status);
  if (weight == 0) return loss;
  const double frames = logprobs->value.dim(0);
  return Smooth(loss, UniformTerm(logprobs, frames, frames), weight);
}

Var SmoothedTransducerLoss(const Var &lattice, std::span<const int> labels, double weight,
                           LossStatus *status) {
  Var loss = TransducerLossOp(lattice, labels, status);
  if (weight == 0) return loss;
  const double frames = lattice->value.dim(0), nodes = lattice->value.dim(1);
  return Smooth(loss, UniformTerm(lattice, frames * nodes, frames + nodes - 1), weight);
}

}  // namespace pmu
