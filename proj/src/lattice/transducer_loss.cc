// src/lattice/transducer_loss.cc

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
#include <limits>
#include <string>
#include <vector>

#include "pmu/core/error.h"
#include "pmu/lattice/log_semiring.h"
#include "pmu/lattice/losses.h"

namespace pmu {

namespace {

struct LatticeView {
  const Tensor &t;
  int frames, nodes, vocab;
  double at(int ti, int u, int v) const {
    return t[(static_cast<std::size_t>(ti) * nodes + u) * vocab + v];
  }
};

LatticeView CheckLattice(const char *op, const Tensor &lattice, std::span<const int> labels) {
  PMU_CHECK(lattice.rank() == 3, op, ": lattice must be [T x (U+1) x V], got ",
            ShapeString(lattice.shape()));
  const int u_len = static_cast<int>(labels.size());
  PMU_CHECK(lattice.dim(1) == u_len + 1, op, ": lattice ", ShapeString(lattice.shape()),
            " inconsistent with U = ", u_len);
  const int vocab = lattice.dim(2);
  for (int y : labels)
    PMU_CHECK(y > kBlankId && y < vocab, op, ": label ", y, " outside [1, ", vocab, ")");
  return {lattice, lattice.dim(0), lattice.dim(1), vocab};
}

}  // namespace

LossResult TransducerLoss(const Tensor &lattice, std::span<const int> labels) {
  const LatticeView lv = CheckLattice("transducer_loss", lattice, labels);
  const int frames = lv.frames, nodes = lv.nodes, u_len = nodes - 1;
  auto blank = [&](int t, int u) { return lv.at(t, u, kBlankId); };
  auto emit = [&](int t, int u) { return lv.at(t, u, labels[u]); };

  // alpha(t, u): log-prob of reaching node (t, u); beta(t, u): log-prob of
  // finishing from (t, u), including the final blank.
  std::vector<double> alpha(static_cast<std::size_t>(frames) * nodes, kLogZero);
  std::vector<double> beta(alpha.size(), kLogZero);
  auto A = [&](int t, int u) -> double & { return alpha[static_cast<std::size_t>(t) * nodes + u]; };
  auto B = [&](int t, int u) -> double & { return beta[static_cast<std::size_t>(t) * nodes + u]; };

  for (int t = 0; t < frames; ++t)
    for (int u = 0; u < nodes; ++u) {
      if (t == 0 && u == 0) {
        A(t, u) = 0;
        continue;
      }
      double v = kLogZero;
      if (t > 0) v = A(t - 1, u) + blank(t - 1, u);
      if (u > 0) v = LogAdd(v, A(t, u - 1) + emit(t, u - 1));
      A(t, u) = v;
    }
  for (int t = frames - 1; t >= 0; --t)
    for (int u = u_len; u >= 0; --u) {
      if (t == frames - 1 && u == u_len) {
        B(t, u) = blank(t, u);
        continue;
      }
      double v = kLogZero;
      if (t + 1 < frames) v = B(t + 1, u) + blank(t, u);
      if (u < u_len) v = LogAdd(v, B(t, u + 1) + emit(t, u));
      B(t, u) = v;
    }

  LossResult res;
  res.grad = Tensor(lattice.shape(), 0);
  const double log_p = B(0, 0);
  if (log_p == kLogZero) {
    res.value = std::numeric_limits<double>::infinity();
    res.status = LossStatus::kUnreachable;
    return res;
  }
  res.value = -log_p;

  auto g = [&](int t, int u, int v) -> Real & {
    return res.grad[(static_cast<std::size_t>(t) * nodes + u) * lv.vocab + v];
  };
  for (int t = 0; t < frames; ++t)
    for (int u = 0; u < nodes; ++u) {
      const double a = A(t, u);
      if (a == kLogZero) continue;
      const double after_blank = (t + 1 < frames) ? B(t + 1, u) : (u == u_len ? 0.0 : kLogZero);
      const double occ_blank = a + blank(t, u) + after_blank - log_p;
      if (occ_blank != kLogZero) g(t, u, kBlankId) -= static_cast<Real>(std::exp(occ_blank));
      if (u < u_len) {
        const double occ_emit = a + emit(t, u) + B(t, u + 1) - log_p;
        if (occ_emit != kLogZero) g(t, u, labels[u]) -= static_cast<Real>(std::exp(occ_emit));
      }
    }
  return res;
}

double TransducerBruteForce(const Tensor &lattice, std::span<const int> labels) {
  const LatticeView lv = CheckLattice("transducer_brute_force", lattice, labels);
  const int frames = lv.frames, u_len = lv.nodes - 1;
  // Paths: an ordering of (frames - 1) blanks and U emissions, then a final blank.
  double count = 1;
  for (int i = 1; i <= u_len; ++i) count = count * (frames - 1 + i) / i;
  if (count > 1e6)
    throw InputError("transducer_brute_force: " + std::to_string(count) + " paths exceed 1e6");

  double total = kLogZero;
  // Depth-first enumeration carrying (t, u, accumulated log-prob).
  auto walk = [&](auto &&self, int t, int u, double acc) -> void {
    if (t == frames - 1 && u == u_len) {
      total = LogAdd(total, acc + lv.at(t, u, kBlankId));
      return;
    }
    if (u < u_len) self(self, t, u + 1, acc + lv.at(t, u, labels[u]));
    if (t + 1 < frames) self(self, t + 1, u, acc + lv.at(t, u, kBlankId));
  };
  walk(walk, 0, 0, 0.0);
  return -total;
}

}  // namespace pmu
