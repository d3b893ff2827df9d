// tests/core_test.cc

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
#include <numeric>
#include <random>

#include "doctest.h"
#include "pmu/core/error.h"
#include "pmu/core/finite_diff.h"
#include "pmu/core/grad_suite.h"
#include "pmu/core/ops.h"
#include "pmu/core/param_store.h"

using namespace pmu;

TEST_CASE("backward: product rule") {
  Var w = Leaf(Tensor({1}, {2}));
  Var x = Leaf(Tensor({1}, {3}));
  Backward(Sum(Mul(w, x)));
  CHECK(w->grad()[0] == 3);
  CHECK(x->grad()[0] == 2);
}

TEST_CASE("backward: constant root leaves grads zero") {
  Var w = Leaf(Tensor({2}, {1, 2}));
  Var root = Sum(Constant(Tensor({2}, {4, 5})));
  Backward(root);
  CHECK(w->grad()[0] == 0);
  CHECK(w->grad()[1] == 0);
}

TEST_CASE("backward: non-scalar root is a contract violation") {
  Var w = Leaf(Tensor({2}, {1, 2}));
  CHECK_THROWS_AS(Backward(Scale(w, 2)), ContractError);
}

TEST_CASE("backward: node with two consumers sums both paths") {
  // f = a*b + a*c  ->  df/da = b + c
  Var a = Leaf(Tensor({1}, {1.5}));
  Var b = Leaf(Tensor({1}, {2}));
  Var c = Leaf(Tensor({1}, {-7}));
  Backward(Sum(Add(Mul(a, b), Mul(a, c))));
  CHECK(a->grad()[0] == doctest::Approx(-5).epsilon(1e-15));
  CHECK(b->grad()[0] == doctest::Approx(1.5));
  CHECK(c->grad()[0] == doctest::Approx(1.5));
}

TEST_CASE("backward: random 2-layer MLP matches finite differences") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    ParamStore ps(seed);
    Var w1 = ps.Create("w1", {5, 3}, Init::kUniformFanIn);
    Var b1 = ps.Create("b1", {5}, Init::kUniformFanIn);
    Var w2 = ps.Create("w2", {1, 5}, Init::kUniformFanIn);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Tensor xt({4, 3});
    for (Real &v : xt.vec()) v = nd(rng);
    Var x = Constant(xt);
    auto f = [&] { return Sum(Linear(Tanh(Linear(x, w1, b1)), w2, nullptr)); };
    ps.ZeroGrad();
    Backward(f());
    auto numeric = FiniteDiffGrad([&] { return double(f()->value[0]); }, ps, 1e-4);
    GradCheckResult res = CompareGrads(numeric, ps);
    CHECK(res.checked == 5 * 3 + 5 + 5);
    CHECK(res.max_rel_error < 1e-5);
  }
}

TEST_CASE("softmax and log_softmax") {
  Var z = Constant(Tensor({1, 2}, {0, 0}));
  Var s = Softmax(z);
  CHECK(s->value[0] == 0.5);
  CHECK(s->value[1] == 0.5);

  // Frozen from numpy: exp(z)/sum(exp(z)) for z = [1, 2, 3].
  Var s3 = Softmax(Constant(Tensor({3}, {1, 2, 3})), 0);
  CHECK(s3->value[0] == doctest::Approx(0.09003057317038046).epsilon(1e-14));
  CHECK(s3->value[1] == doctest::Approx(0.24472847105479764).epsilon(1e-14));
  CHECK(s3->value[2] == doctest::Approx(0.6652409557748219).epsilon(1e-14));
  Var l3 = LogSoftmax(Constant(Tensor({3}, {1, 2, 3})), 0);
  CHECK(l3->value[0] == doctest::Approx(-2.40760596444438).epsilon(1e-14));
  CHECK(l3->value[2] == doctest::Approx(-0.40760596444437994).epsilon(1e-14));

  // Shift invariance.
  Var a = Softmax(Constant(Tensor({1, 2}, {0.3, 1.1})));
  Var b = Softmax(Constant(Tensor({1, 2}, {100.3, 101.1})));
  CHECK(std::abs(a->value[0] - b->value[0]) < 1e-12);
}

TEST_CASE("softmax property: simplex point for arbitrary finite input") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd(0, 50);
  for (int trial = 0; trial < 200; ++trial) {
    Tensor z({3, 7});
    for (Real &v : z.vec()) v = nd(rng);
    Var s = Softmax(Constant(z), 1);
    Var ls = LogSoftmax(Constant(z), 1);
    for (int r = 0; r < 3; ++r) {
      double sum = 0;
      for (int c = 0; c < 7; ++c) {
        double p = s->value.at(r, c);
        CHECK(p >= 0);
        sum += p;
        if (p > 1e-300) CHECK(std::abs(std::log(p) - ls->value.at(r, c)) < 1e-12);
      }
      CHECK(std::abs(sum - 1) < 1e-12);
    }
  }
}

TEST_CASE("layer_norm of a constant vector is zero") {
  Var y = LayerNorm(Constant(Tensor({1, 4}, 3.25)), Constant(Tensor({4}, 1)),
                    Constant(Tensor({4}, 0)));
  for (Real v : y->value.vec()) CHECK(v == 0);
}

TEST_CASE("linear with identity weight and zero bias is the identity") {
  Tensor eye({3, 3}, 0);
  for (int i = 0; i < 3; ++i) eye.at(i, i) = 1;
  Tensor x({2, 3}, {1, -2, 3, 4.5, 5, -6});
  Var y = Linear(Constant(x), Constant(eye), Constant(Tensor({3}, 0)));
  CHECK(y->value == x);
}

TEST_CASE("shape mismatches name the operation") {
  Var a = Constant(Tensor({2, 3}));
  Var b = Constant(Tensor({2, 4}));
  try {
    MatMul(a, b);
    FAIL("expected throw");
  } catch (const ContractError &e) {
    CHECK(std::string(e.what()).find("matmul") != std::string::npos);
    CHECK(std::string(e.what()).find("[2x3]") != std::string::npos);
  }
  CHECK_THROWS_AS(Add(a, b), ContractError);
  CHECK_THROWS_AS(Linear(a, b, nullptr), ContractError);
  CHECK_THROWS_AS(DepthwiseConv1d(a, Constant(Tensor({2, 3})), nullptr), ContractError);
  CHECK_THROWS_AS(MultiHeadAttention(a, a, a, 2), ContractError);
  CHECK_THROWS_AS(Softmax(a, 2), ContractError);
}

TEST_CASE("depthwise conv with a centred delta kernel is the identity") {
  Tensor x({4, 2}, {1, 2, 3, 4, 5, 6, 7, 8});
  Tensor k({2, 3}, {0, 1, 0, 0, 1, 0});
  Var y = DepthwiseConv1d(Constant(x), Constant(k), nullptr);
  CHECK(y->value == x);
}

TEST_CASE("conv2d output size uses padded stride arithmetic") {
  for (int t : {1, 2, 5, 8, 9, 17}) {
    Var y = Conv2d(Constant(Tensor({1, t, 6}, 1)), Constant(Tensor({2, 1, 3, 3}, 1)), nullptr, 2, 1);
    CHECK(y->value.dim(1) == (t + 1) / 2);
    CHECK(y->value.dim(2) == 3);
  }
}

TEST_CASE("attention mask blocks masked keys") {
  Tensor q({1, 2}, {1, 0});
  Tensor kv({2, 2}, {1, 0, 0, 1});
  const unsigned char mask[] = {0, 1};
  Var y = MultiHeadAttention(Constant(q), Constant(kv), Constant(kv), 1, mask);
  CHECK(y->value[0] == 0);
  CHECK(y->value[1] == 1);
}

TEST_CASE("dropout is inverted and disabled without rng") {
  Var x = Constant(Tensor({1, 1000}, 1));
  CHECK(Dropout(x, 0.5, nullptr) == x);
  std::mt19937_64 rng(3);
  Var y = Dropout(x, 0.25, &rng);
  int zeros = 0;
  for (Real v : y->value.vec()) {
    CHECK((v == 0 || std::abs(v - 1 / 0.75) < 1e-15));
    zeros += v == 0;
  }
  CHECK(zeros > 150);
  CHECK(zeros < 350);
}

TEST_CASE("finite_diff_grad examples") {
  ParamStore ps;
  Var w = ps.Create("w", {1}, Init::kZero);
  w->value[0] = 3;
  auto est = FiniteDiffGrad([&] { return double(w->value[0] * w->value[0]); }, ps, 1e-4);
  CHECK(std::abs(est.at("w")[0] - 6.0) < 1e-7);

  auto flat = FiniteDiffGrad([] { return 42.0; }, ps, 1e-4);
  CHECK(std::abs(flat.at("w")[0]) < 1e-8);
}

TEST_CASE("every primitive matches finite differences") {
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    for (const GradCheck &g : CheckAllPrimitives(seed)) {
      INFO(g.name << " seed " << seed);
      CHECK(g.checked > 0);
      CHECK(g.max_rel_error <= 1e-5);
    }
}

TEST_CASE("param store aliasing and deterministic init") {
  ParamStore a(7), b(7);
  Var x = a.Create("head/a", {3, 2}, Init::kUniformFanIn);
  a.Create("other", {4}, Init::kUniformFanIn);
  a.Alias("head/b", "head/a");
  CHECK(a.Get("head/b")->id == x->id);
  CHECK(a.Canonical("head/b") == "head/a");
  CHECK(a.Trainable().size() == 2);

  Var y = b.Create("head/a", {3, 2}, Init::kUniformFanIn);
  CHECK(y->value == x->value);
  CHECK_THROWS_AS(a.Create("other", {1}, Init::kZero), ContractError);

  ParamStore s = a.Shadow();
  CHECK(s.Get("head/b")->id == s.Get("head/a")->id);
  CHECK(s.Get("head/a")->id != x->id);
  CHECK(s.Get("head/a")->value == x->value);
}
