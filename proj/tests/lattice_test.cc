// tests/lattice_test.cc

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
#include <random>

#include "doctest.h"
#include "pmu/core/error.h"
#include "pmu/core/grad_suite.h"
#include "pmu/core/ops.h"
#include "pmu/lattice/loss_check.h"
#include "pmu/lattice/losses.h"

using namespace pmu;

namespace {

Tensor LogOf(Shape shape, std::vector<Real> probs) {
  for (Real &p : probs) p = std::log(p);
  return Tensor(std::move(shape), std::move(probs));
}

}  // namespace

TEST_CASE("ctc: single frame must emit the label") {
  Tensor e = LogOf({1, 3}, {0.2, 0.5, 0.3});
  const int y[] = {1};
  LossResult r = CtcLoss(e, y);
  CHECK(r.value == doctest::Approx(-std::log(0.5)).epsilon(1e-15));
  CHECK(r.value == doctest::Approx(0.6931).epsilon(1e-4));
  LossResult empty = CtcLoss(e, {});
  CHECK(empty.value == doctest::Approx(-std::log(0.2)).epsilon(1e-15));
}

TEST_CASE("ctc: two-frame hand enumeration") {
  // preimages of [a]: a-blank, blank-a, a-a
  Tensor e = LogOf({2, 2}, {0.4, 0.6, 0.7, 0.3});
  const int y[] = {1};
  const double expected = -std::log(0.6 * 0.7 + 0.4 * 0.3 + 0.6 * 0.3);
  CHECK(CtcLoss(e, y).value == doctest::Approx(expected).epsilon(1e-14));
  CHECK(CtcBruteForce(e, y) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("ctc: unreachable targets") {
  Tensor e = LogOf({2, 3}, {0.2, 0.5, 0.3, 0.2, 0.5, 0.3});
  const int too_long[] = {1, 2, 1};
  LossResult r = CtcLoss(e, too_long);
  CHECK(std::isinf(r.value));
  CHECK(r.status == LossStatus::kUnreachable);
  for (Real g : r.grad.vec()) CHECK(g == 0);
  CHECK(std::isinf(CtcBruteForce(e, too_long)));
  // a repeated label needs a separating blank: [a, a] needs 3 frames
  const int rep[] = {1, 1};
  CHECK(CtcLoss(e, rep).status == LossStatus::kUnreachable);
  CHECK(CtcLoss(e, std::vector<int>{1, 2}).status == LossStatus::kOk);
}

TEST_CASE("ctc: label outside vocabulary or blank is a contract violation") {
  Tensor e = LogOf({2, 3}, {0.2, 0.5, 0.3, 0.2, 0.5, 0.3});
  CHECK_THROWS_AS(CtcLoss(e, std::vector<int>{0}), ContractError);
  CHECK_THROWS_AS(CtcLoss(e, std::vector<int>{3}), ContractError);
}

TEST_CASE("ctc: brute force refuses large instances") {
  Tensor e({8, 10}, std::log(0.1));
  CHECK_THROWS_AS(CtcBruteForce(e, std::vector<int>{1}), InputError);
}

TEST_CASE("ctc: adding a blank frame to an empty target adds -log p(blank)") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    LossInstance inst = RandomCtcInstance(rng);
    const int v = inst.logprobs.dim(1), t = inst.logprobs.dim(0);
    std::vector<Real> data = inst.logprobs.vec();
    std::vector<Real> extra(v, std::log(1e-12 / (v - 1)));
    extra[0] = std::log(1 - 1e-12);
    data.insert(data.end(), extra.begin(), extra.end());
    Tensor longer({t + 1, v}, data);
    const double diff = CtcLoss(longer, {}).value - CtcLoss(inst.logprobs, {}).value;
    CHECK(diff == doctest::Approx(-extra[0]).epsilon(1e-12));
  }
}

TEST_CASE("ctc: no NaN/Inf for probabilities down to 1e-30") {
  Tensor e = LogOf({4, 3}, {1 - 2e-30, 1e-30, 1e-30, 1e-30, 1 - 2e-30, 1e-30,
                            1e-30, 1e-30, 1 - 2e-30, 1 - 2e-30, 1e-30, 1e-30});
  const int y[] = {2, 1};
  LossResult r = CtcLoss(e, y);
  CHECK(std::isfinite(r.value));
  CHECK(r.grad.AllFinite());
  CHECK(r.value == doctest::Approx(CtcBruteForce(e, y)).epsilon(1e-12));
}

TEST_CASE("transducer: small closed forms") {
  Tensor one = LogOf({1, 1, 3}, {0.3, 0.4, 0.3});
  CHECK(TransducerLoss(one, {}).value == doctest::Approx(-std::log(0.3)).epsilon(1e-15));

  // emit y1 at (1,0) with 0.6, then blank at (1,1) with 0.7
  Tensor l = LogOf({1, 2, 3}, {0.1, 0.6, 0.3, 0.7, 0.2, 0.1});
  const int y[] = {1};
  CHECK(TransducerLoss(l, y).value == doctest::Approx(-std::log(0.42)).epsilon(1e-14));
  CHECK(TransducerLoss(l, y).value == doctest::Approx(0.8675).epsilon(1e-4));
}

TEST_CASE("transducer: T=2, U=1 has exactly two paths") {
  // lattice[t][u][v], V = {blank, a}
  Tensor l = LogOf({2, 2, 2}, {0.3, 0.7, 0.6, 0.4, 0.45, 0.55, 0.8, 0.2});
  const int y[] = {1};
  // emit@(0,0) blank@(0,1) blank@(1,1)  |  blank@(0,0) emit@(1,0) blank@(1,1)
  const double p = 0.7 * 0.6 * 0.8 + 0.3 * 0.55 * 0.8;
  CHECK(TransducerBruteForce(l, y) == doctest::Approx(-std::log(p)).epsilon(1e-14));
  CHECK(TransducerLoss(l, y).value == doctest::Approx(-std::log(p)).epsilon(1e-14));
}

TEST_CASE("transducer: lattice inconsistent with U is rejected") {
  Tensor l({2, 2, 3}, std::log(1.0 / 3));
  CHECK_THROWS_AS(TransducerLoss(l, std::vector<int>{1, 2}), ContractError);
  CHECK_THROWS_AS(TransducerLoss(l, std::vector<int>{5}), ContractError);
}

TEST_CASE("oracle equivalence on 200 random instances") {
  OracleReport ctc = CheckCtcOracle(200, 11);
  CHECK(ctc.instances == 200);
  CHECK(ctc.max_abs_diff <= 1e-9);
  OracleReport rnnt = CheckTransducerOracle(200, 12);
  CHECK(rnnt.max_abs_diff <= 1e-9);
}

TEST_CASE("loss gradients match finite differences") {
  GradientReport ctc = CheckCtcGradient(30, 3);
  CHECK(ctc.max_rel_error <= 1e-5);
  GradientReport rnnt = CheckTransducerGradient(30, 4);
  CHECK(rnnt.max_rel_error <= 1e-5);
}

TEST_CASE("tape wrappers: gradients through log_softmax of logits") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Tensor logits({4, 4});
    for (Real &v : logits.vec()) v = nd(rng);
    const std::vector<int> y{1, 3};
    GradCheck c = CheckGradient("ctc", {Leaf(logits)}, [&](const std::vector<Var> &v) {
      return SmoothedCtcLoss(LogSoftmax(v[0]), y, 0.1);
    }, seed);
    CHECK(c.max_rel_error <= 1e-5);

    Tensor lat({3, 3, 4});
    for (Real &v : lat.vec()) v = nd(rng);
    GradCheck t = CheckGradient("rnnt", {Leaf(lat)}, [&](const std::vector<Var> &v) {
      return SmoothedTransducerLoss(LogSoftmax(v[0]), y, 0.1);
    }, seed);
    CHECK(t.max_rel_error <= 1e-5);
  }
}

TEST_CASE("smoothing weight 0 is the plain loss; uniform input gives ln V per position") {
  Tensor uni({3, 4}, std::log(0.25));
  Var lp = Constant(uni);
  const std::vector<int> y{2};
  CHECK(SmoothedCtcLoss(lp, y, 0)->value[0] == CtcLoss(uni, y).value);
  // With uniform posteriors the regularizer equals T * ln V.
  Var s = SmoothedCtcLoss(lp, y, 0.5);
  CHECK(s->value[0] == doctest::Approx(0.5 * CtcLoss(uni, y).value + 0.5 * 3 * std::log(4.0)));
}

TEST_CASE("label_smoothed_nll") {
  const std::vector<double> p{std::log(0.7), std::log(0.1), std::log(0.1), std::log(0.1)};
  CHECK(LabelSmoothedNll(p, 0, 0) == doctest::Approx(-std::log(0.7)).epsilon(1e-15));
  // frozen: 0.9 * -ln 0.7 + 0.1 * mean(-ln p)
  CHECK(LabelSmoothedNll(p, 0, 0.1) == doctest::Approx(0.5026182051178809).epsilon(1e-14));
  const std::vector<double> u(5, std::log(0.2));
  for (double w : {0.0, 0.1, 0.7})
    CHECK(LabelSmoothedNll(u, 3, w) == doctest::Approx(std::log(5.0)).epsilon(1e-14));
  CHECK_THROWS_AS(LabelSmoothedNll(p, 0, 1.0), ContractError);
}
