// src/lattice/ctc_loss.cc

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

#include <algorithm>
#include <cmath>
#include <string>
#include <limits>
#include <vector>

#include "pmu/core/error.h"
#include "pmu/lattice/log_semiring.h"
#include "pmu/lattice/losses.h"

namespace pmu {

namespace {

void CheckCtcInputs(const Tensor &logprobs, std::span<const int> labels) {
  PMU_CHECK(logprobs.rank() == 2, "ctc_loss: emissions must be [T x V], got ",
            ShapeString(logprobs.shape()));
  const int vocab = logprobs.dim(1);
  for (int y : labels)
    PMU_CHECK(y > kBlankId && y < vocab, "ctc_loss: label ", y, " outside [1, ", vocab, ")");
}

}  // namespace

// Forward-backward over the blank-interleaved label graph
// (blank, y1, blank, y2, ..., yU, blank). alpha includes the emission at t,
// beta excludes it, so occupancy(t, s) = exp(alpha + beta - log P).
LossResult CtcLoss(const Tensor &logprobs, std::span<const int> labels) {
  CheckCtcInputs(logprobs, labels);
  const int num_frames = logprobs.dim(0);
  const int u_len = static_cast<int>(labels.size());
  const int states = 2 * u_len + 1;

  LossResult res;
  res.grad = Tensor(logprobs.shape(), 0);

  int repeats = 0;
  for (int i = 1; i < u_len; ++i) repeats += labels[i] == labels[i - 1];
  if (num_frames < u_len + repeats) {
    res.value = std::numeric_limits<double>::infinity();
    res.status = LossStatus::kUnreachable;
    return res;
  }

  auto label_of = [&](int s) { return s % 2 == 0 ? kBlankId : labels[s / 2]; };
  // Skipping the blank between s-2 and s is allowed when both are distinct labels.
  auto can_skip = [&](int s) { return s % 2 == 1 && s >= 2 && label_of(s) != label_of(s - 2); };
  auto lp = [&](int t, int s) { return static_cast<double>(logprobs.at(t, label_of(s))); };

  std::vector<double> alpha(static_cast<std::size_t>(num_frames) * states, kLogZero);
  std::vector<double> beta(alpha.size(), kLogZero);
  auto A = [&](int t, int s) -> double & { return alpha[static_cast<std::size_t>(t) * states + s]; };
  auto B = [&](int t, int s) -> double & { return beta[static_cast<std::size_t>(t) * states + s]; };

  A(0, 0) = lp(0, 0);
  if (states > 1) A(0, 1) = lp(0, 1);
  for (int t = 1; t < num_frames; ++t)
    for (int s = 0; s < states; ++s) {
      double v = A(t - 1, s);
      if (s >= 1) v = LogAdd(v, A(t - 1, s - 1));
      if (can_skip(s)) v = LogAdd(v, A(t - 1, s - 2));
      A(t, s) = v + lp(t, s);
    }

  const int last = num_frames - 1;
  B(last, states - 1) = 0;
  if (states > 1) B(last, states - 2) = 0;
  for (int t = last - 1; t >= 0; --t)
    for (int s = 0; s < states; ++s) {
      double v = B(t + 1, s) + lp(t + 1, s);
      if (s + 1 < states) v = LogAdd(v, B(t + 1, s + 1) + lp(t + 1, s + 1));
      if (s + 2 < states && can_skip(s + 2)) v = LogAdd(v, B(t + 1, s + 2) + lp(t + 1, s + 2));
      B(t, s) = v;
    }

  double log_p = A(last, states - 1);
  if (states > 1) log_p = LogAdd(log_p, A(last, states - 2));
  if (log_p == kLogZero) {
    res.value = std::numeric_limits<double>::infinity();
    res.status = LossStatus::kUnreachable;
    return res;
  }
  res.value = -log_p;

  for (int t = 0; t < num_frames; ++t)
    for (int s = 0; s < states; ++s) {
      const double occ = A(t, s) + B(t, s) - log_p;
      if (occ == kLogZero) continue;
      res.grad.at(t, label_of(s)) -= static_cast<Real>(std::exp(occ));
    }
  return res;
}

double CtcBruteForce(const Tensor &logprobs, std::span<const int> labels) {
  CheckCtcInputs(logprobs, labels);
  const int num_frames = logprobs.dim(0), vocab = logprobs.dim(1);
  double count = std::pow(static_cast<double>(vocab), num_frames);
  if (count > 1e6) throw InputError("ctc_brute_force: V^T = " + std::to_string(count) + " exceeds 1e6");

  std::vector<int> path(num_frames, 0);
  std::vector<int> collapsed;
  double total = kLogZero;
  while (true) {
    collapsed.clear();
    int prev = -1;
    for (int sym : path) {
      if (sym != prev && sym != kBlankId) collapsed.push_back(sym);
      prev = sym;
    }
    if (collapsed.size() == labels.size() &&
        std::equal(collapsed.begin(), collapsed.end(), labels.begin())) {
      double lp = 0;
      for (int t = 0; t < num_frames; ++t) lp += logprobs.at(t, path[t]);
      total = LogAdd(total, lp);
    }
    int pos = num_frames - 1;
    while (pos >= 0 && ++path[pos] == vocab) path[pos--] = 0;
    if (pos < 0) break;
  }
  return -total;
}

double LabelSmoothedNll(std::span<const double> logprobs, int target, double weight) {
  PMU_CHECK(target >= 0 && target < static_cast<int>(logprobs.size()),
            "label_smoothed_nll: target ", target, " outside vocab of ", logprobs.size());
  PMU_CHECK(weight >= 0 && weight < 1, "label_smoothed_nll: weight ", weight, " outside [0, 1)");
  double mean = 0;
  for (double lp : logprobs) mean -= lp;
  mean /= static_cast<double>(logprobs.size());
  return (1 - weight) * -logprobs[target] + weight * mean;
}

}  // namespace pmu
