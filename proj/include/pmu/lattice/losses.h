// pmu/lattice/losses.h

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

#ifndef PMU_LATTICE_LOSSES_H_
#define PMU_LATTICE_LOSSES_H_

#include <span>

#include "pmu/core/autograd.h"
#include "pmu/core/label_sequence.h"
#include "pmu/core/tensor.h"

namespace pmu {

enum class LossStatus { kOk, kUnreachable };

// Negative log-probability of a label sequence (nats) and its gradient with
// respect to the input log-probabilities.
struct LossResult {
  double value = 0;
  Tensor grad;
  LossStatus status = LossStatus::kOk;
};

// CTC over emissions [T x V] of normalized log-probabilities, blank id 0.
// A target that cannot be reached (T < U + adjacent repeats, or zero
// probability) yields value +inf, a zero gradient and kUnreachable.
LossResult CtcLoss(const Tensor &logprobs, std::span<const int> labels);

// Transducer loss over a lattice [T x (U+1) x V] of normalized
// log-probabilities. Node (t, u) emits labels[u] (moving to u+1) or blank
// (moving to t+1); every path ends with blank at (T-1, U).
LossResult TransducerLoss(const Tensor &lattice, std::span<const int> labels);

// Exhaustive oracles. They refuse (InputError) instances with more than
// 10^6 candidate strings / paths.
double CtcBruteForce(const Tensor &logprobs, std::span<const int> labels);
double TransducerBruteForce(const Tensor &lattice, std::span<const int> labels);

// (1 - weight) * -logprobs[target] + weight * mean_v(-logprobs[v]).
double LabelSmoothedNll(std::span<const double> logprobs, int target, double weight);

// Tape-recording wrappers. The returned scalar's backward scales the stored
// gradient by the upstream gradient. `status` may be null.
Var CtcLossOp(const Var &logprobs, std::span<const int> labels, LossStatus *status = nullptr);
Var TransducerLossOp(const Var &lattice, std::span<const int> labels,
                     LossStatus *status = nullptr);

// Label-smoothed sequence losses: (1 - w) * L + w * R, where R is the
// uniform-target cross entropy mean_v(-log p) averaged over all lattice
// positions and scaled to the length of one alignment path (T for CTC,
// T + U for the transducer). With w = 0 these are exactly the plain losses.
Var SmoothedCtcLoss(const Var &logprobs, std::span<const int> labels, double weight,
                    LossStatus *status = nullptr);
Var SmoothedTransducerLoss(const Var &lattice, std::span<const int> labels, double weight,
                           LossStatus *status = nullptr);

}  // namespace pmu

#endif  // PMU_LATTICE_LOSSES_H_
