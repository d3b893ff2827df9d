// src/lattice/loss_check.cc

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

#include "pmu/lattice/loss_check.h"

#include <algorithm>
#include <cmath>

#include "pmu/core/finite_diff.h"
#include "pmu/lattice/losses.h"

namespace pmu {

namespace {

// Normalized random log-distributions along the last axis.
Tensor RandomLogDistributions(Shape shape, std::mt19937_64 &rng) {
  std::normal_distribution<double> nd(0, 1.5);
  Tensor t(std::move(shape), 0);
  const std::size_t vocab = t.shape().back();
  for (std::size_t off = 0; off < t.size(); off += vocab) {
    double mx = -1e300;
    for (std::size_t v = 0; v < vocab; ++v) mx = std::max(mx, t[off + v] = nd(rng));
    double sum = 0;
    for (std::size_t v = 0; v < vocab; ++v) sum += std::exp(t[off + v] - mx);
    const double lse = mx + std::log(sum);
    for (std::size_t v = 0; v < vocab; ++v) t[off + v] -= lse;
  }
  return t;
}

std::vector<int> RandomLabels(std::mt19937_64 &rng, int max_len, int vocab) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> sym(1, vocab - 1);
  std::vector<int> y(len(rng));
  for (int &v : y) v = sym(rng);
  return y;
}

double FiniteDiff(const std::function<double(const Tensor &)> &f, Tensor &x, std::size_t i,
                  double eps) {
  const Real saved = x[i];
  x[i] = saved + eps;
  const double plus = f(x);
  x[i] = saved - eps;
  const double minus = f(x);
  x[i] = saved;
  return (plus - minus) / (2 * eps);
}

template <typename LossFn>
GradientReport CheckGradient(int instances, std::uint64_t seed, double eps,
                             LossInstance (*make)(std::mt19937_64 &), LossFn loss) {
  std::mt19937_64 rng(seed);
  GradientReport rep;
  while (rep.instances < instances) {
    LossInstance inst = make(rng);
    LossResult res = loss(inst.logprobs, inst.labels);
    if (res.status != LossStatus::kOk) continue;
    ++rep.instances;
    auto f = [&](const Tensor &x) { return loss(x, inst.labels).value; };
    for (std::size_t i = 0; i < inst.logprobs.size(); ++i) {
      const double numeric = FiniteDiff(f, inst.logprobs, i, eps);
      rep.max_rel_error = std::max(rep.max_rel_error, RelativeError(res.grad[i], numeric));
      ++rep.checked;
    }
  }
  return rep;
}

}  // namespace

LossInstance RandomCtcInstance(std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> frames(1, 4), vocab(2, 4);
  const int t = frames(rng), v = vocab(rng);
  LossInstance inst;
  inst.labels = RandomLabels(rng, 3, v);
  inst.logprobs = RandomLogDistributions({t, v}, rng);
  return inst;
}

LossInstance RandomTransducerInstance(std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> frames(1, 4), vocab(2, 4);
  const int t = frames(rng), v = vocab(rng);
  LossInstance inst;
  inst.labels = RandomLabels(rng, 3, v);
  inst.logprobs = RandomLogDistributions({t, static_cast<int>(inst.labels.size()) + 1, v}, rng);
  return inst;
}

OracleReport CheckCtcOracle(int instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  OracleReport rep;
  for (int i = 0; i < instances; ++i) {
    LossInstance inst = RandomCtcInstance(rng);
    const double dp = CtcLoss(inst.logprobs, inst.labels).value;
    const double brute = CtcBruteForce(inst.logprobs, inst.labels);
    ++rep.instances;
    if (std::isinf(dp) && std::isinf(brute)) {
      ++rep.unreachable;
      continue;
    }
    rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(dp - brute));
  }
  return rep;
}

OracleReport CheckTransducerOracle(int instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  OracleReport rep;
  for (int i = 0; i < instances; ++i) {
    LossInstance inst = RandomTransducerInstance(rng);
    const double dp = TransducerLoss(inst.logprobs, inst.labels).value;
    const double brute = TransducerBruteForce(inst.logprobs, inst.labels);
    ++rep.instances;
    if (std::isinf(dp) && std::isinf(brute)) {
      ++rep.unreachable;
      continue;
    }
    rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(dp - brute));
  }
  return rep;
}

GradientReport CheckCtcGradient(int instances, std::uint64_t seed, double eps) {
  return CheckGradient(instances, seed, eps, &RandomCtcInstance,
                       [](const Tensor &x, std::span<const int> y) { return CtcLoss(x, y); });
}

GradientReport CheckTransducerGradient(int instances, std::uint64_t seed, double eps) {
  return CheckGradient(instances, seed, eps, &RandomTransducerInstance,
                       [](const Tensor &x, std::span<const int> y) { return TransducerLoss(x, y); });
}

}  // namespace pmu
