// src/core/grad_suite.cc

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

#include "pmu/core/grad_suite.h"

#include <random>

#include "pmu/core/finite_diff.h"
#include "pmu/core/ops.h"

namespace pmu {

namespace {

Tensor RandomTensor(Shape shape, std::mt19937_64 &rng, double scale = 1.0) {
  std::normal_distribution<double> dist(0, scale);
  Tensor t(std::move(shape), 0);
  for (Real &v : t.vec()) v = static_cast<Real>(dist(rng));
  return t;
}

}  // namespace

GradCheck CheckGradient(const std::string &name, std::vector<Var> leaves,
                        const std::function<Var(const std::vector<Var> &)> &build,
                        std::uint64_t seed, double eps) {
  std::mt19937_64 rng(seed ^ 0x5EEDull);
  Var probe = build(leaves);
  Var weights = Constant(RandomTensor(probe->value.shape(), rng));
  auto scalar = [&]() { return Sum(Mul(build(leaves), weights)); };

  for (const Var &l : leaves) l->ZeroGrad();
  Backward(scalar());
  const std::vector<Tensor> numeric =
      FiniteDiffGrad([&]() { return static_cast<double>(scalar()->value[0]); }, leaves, eps);

  GradCheck out{name, 0, 0};
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (!leaves[k]->requires_grad) continue;
    for (std::size_t i = 0; i < numeric[k].size(); ++i) {
      const double a = leaves[k]->has_grad() ? leaves[k]->grad()[i] : 0.0;
      out.max_rel_error = std::max(out.max_rel_error, RelativeError(a, numeric[k][i]));
      ++out.checked;
    }
  }
  return out;
}

std::vector<GradCheck> CheckAllPrimitives(std::uint64_t seed, double eps) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> small(2, 4);
  auto leaf = [&](Shape s, double scale = 1.0) { return Leaf(RandomTensor(std::move(s), rng, scale)); };
  const int r = small(rng), c = small(rng), k = small(rng);

  std::vector<GradCheck> out;
  auto check = [&](const std::string &name, std::vector<Var> leaves,
                   const std::function<Var(const std::vector<Var> &)> &build) {
    out.push_back(CheckGradient(name, std::move(leaves), build, seed, eps));
  };

  check("add", {leaf({r, c}), leaf({r, c})}, [](auto &v) { return Add(v[0], v[1]); });
  check("sub", {leaf({r, c}), leaf({r, c})}, [](auto &v) { return Sub(v[0], v[1]); });
  check("mul", {leaf({r, c}), leaf({r, c})}, [](auto &v) { return Mul(v[0], v[1]); });
  check("scale", {leaf({r, c})}, [](auto &v) { return Scale(v[0], -1.7); });
  check("add_row_vector", {leaf({r, c}), leaf({c})},
        [](auto &v) { return AddRowVector(v[0], v[1]); });
  check("matmul", {leaf({r, k}), leaf({k, c})}, [](auto &v) { return MatMul(v[0], v[1]); });
  check("matmul_nt", {leaf({r, k}), leaf({c, k})}, [](auto &v) { return MatMulNT(v[0], v[1]); });
  check("linear", {leaf({r, k}), leaf({c, k}), leaf({c})},
        [](auto &v) { return Linear(v[0], v[1], v[2]); });
  check("sigmoid", {leaf({r, c})}, [](auto &v) { return Sigmoid(v[0]); });
  check("tanh", {leaf({r, c})}, [](auto &v) { return Tanh(v[0]); });
  check("swish", {leaf({r, c})}, [](auto &v) { return Swish(v[0]); });
  check("glu", {leaf({r, 2 * c})}, [](auto &v) { return Glu(v[0]); });
  check("softmax", {leaf({r, c, k})}, [](auto &v) { return Softmax(v[0], 1); });
  check("log_softmax", {leaf({r, c})}, [](auto &v) { return LogSoftmax(v[0], -1); });
  check("layer_norm", {leaf({r, c + 1}), leaf({c + 1}), leaf({c + 1})},
        [](auto &v) { return LayerNorm(v[0], v[1], v[2]); });
  check("depthwise_conv1d", {leaf({r + 2, c}), leaf({c, 3}), leaf({c})},
        [](auto &v) { return DepthwiseConv1d(v[0], v[1], v[2]); });
  check("conv2d", {leaf({2, 5, 4}), leaf({c, 2, 3, 3}), leaf({c})},
        [](auto &v) { return Conv2d(v[0], v[1], v[2], 2, 1); });
  check("reshape", {leaf({r, c})}, [r, c](auto &v) { return Reshape(v[0], {c, r}); });
  check("slice_cols", {leaf({r, c + 2})}, [c](auto &v) { return SliceCols(v[0], 1, c); });
  check("slice_rows", {leaf({r + 2, c})}, [r](auto &v) { return SliceRows(v[0], 1, r); });
  check("concat_cols", {leaf({r, c}), leaf({r, k})},
        [](auto &v) { return ConcatCols({v[0], v[1], v[0]}); });
  check("concat_rows", {leaf({r, c}), leaf({k, c})},
        [](auto &v) { return ConcatRows({v[1], v[0]}); });
  check("gather_rows", {leaf({r, c})}, [](auto &v) {
    const int ids[] = {1, 0, 1};
    return GatherRows(v[0], ids);
  });
  check("outer_add", {leaf({r, c}), leaf({k, c})}, [](auto &v) { return OuterAdd(v[0], v[1]); });
  check("swap_axes01", {leaf({r, c, k})}, [](auto &v) { return SwapAxes01(v[0]); });
  check("sum", {leaf({r, c})}, [](auto &v) { return Sum(v[0]); });
  check("mean", {leaf({r, c})}, [](auto &v) { return Mean(v[0]); });
  check("dropout", {leaf({r, c})}, [seed](auto &v) {
    std::mt19937_64 drop_rng(seed + 1);
    return Dropout(v[0], 0.3, &drop_rng);
  });
  {
    const int tq = r + 1, tk = k + 1, d = 4;
    std::vector<unsigned char> mask(tq * tk, 1);
    for (int i = 0; i < tq; ++i) mask[i * tk + (i % tk)] = 0;
    check("multi_head_attention", {leaf({tq, d}), leaf({tk, d}), leaf({tk, d})},
          [mask](auto &v) { return MultiHeadAttention(v[0], v[1], v[2], 2, mask); });
  }
  {
    const int in = k, hidden = c;
    check("lstm_step",
          {leaf({1, in}), leaf({1, in}), leaf({4 * hidden, in}, 0.5), leaf({4 * hidden, hidden}, 0.5),
           leaf({4 * hidden}), leaf({1, hidden}), leaf({1, hidden})},
          [](auto &v) {
            LstmParams p{v[2], v[3], v[4]};
            LstmState s{v[5], v[6]};
            s = LstmStep(v[0], s, p);
            s = LstmStep(v[1], s, p);
            return ConcatCols({s.h, s.c});
          });
  }
  return out;
}

}  // namespace pmu
