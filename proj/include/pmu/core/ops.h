// pmu/core/ops.h

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

#ifndef PMU_CORE_OPS_H_
#define PMU_CORE_OPS_H_

#include <random>
#include <span>
#include <utility>
#include <vector>

#include "pmu/core/autograd.h"

namespace pmu {

// Differentiable primitives. Every function records itself on the tape
// (unless a NoGradGuard is active) and throws ContractError naming the
// operation and the offending shapes on mismatch.
//
// Matrix conventions: activations are [rows x features]; Linear weights are
// [out x in] and are applied as x * W^T + b.

Var Add(const Var &a, const Var &b);
Var Sub(const Var &a, const Var &b);
Var Mul(const Var &a, const Var &b);
Var Scale(const Var &a, Real s);
// x[N x C] + b[C] broadcast over rows.
Var AddRowVector(const Var &x, const Var &b);

Var MatMul(const Var &a, const Var &b);    // [M x K] * [K x N]
Var MatMulNT(const Var &a, const Var &b);  // [M x K] * [N x K]^T
// b may be null.
Var Linear(const Var &x, const Var &weight, const Var &bias);

Var Sigmoid(const Var &x);
Var Tanh(const Var &x);
Var Swish(const Var &x);
// Splits the last dim in halves (a, b) and returns a * sigmoid(b).
Var Glu(const Var &x);

// Max-shifted; axis may be negative (counted from the back).
Var Softmax(const Var &x, int axis = -1);
Var LogSoftmax(const Var &x, int axis = -1);

// Normalizes over the last dim.
Var LayerNorm(const Var &x, const Var &gain, const Var &bias, Real eps = 1e-5);

// x[T x C], kernel[C x K] (K odd, zero "same" padding), bias[C] or null.
Var DepthwiseConv1d(const Var &x, const Var &kernel, const Var &bias);

// x[Cin x H x W], weight[Cout x Cin x KH x KW], bias[Cout] or null.
Var Conv2d(const Var &x, const Var &weight, const Var &bias, int stride, int pad);

Var Reshape(const Var &x, Shape shape);
Var SliceCols(const Var &x, int start, int len);
Var SliceRows(const Var &x, int start, int len);
Var ConcatCols(const std::vector<Var> &parts);
Var ConcatRows(const std::vector<Var> &parts);
// Row lookup table[ids[i], :] -> [n x C].
Var GatherRows(const Var &table, std::span<const int> ids);
// out[t, u, :] = a[t, :] + b[u, :]; a[T x J], b[U x J] -> [T x U x J].
Var OuterAdd(const Var &a, const Var &b);

// [A x B x C] -> [B x A x C].
Var SwapAxes01(const Var &x);

Var Sum(const Var &x);
Var Mean(const Var &x);

// Inverted dropout. Identity when rng is null or p == 0.
Var Dropout(const Var &x, Real p, std::mt19937_64 *rng);

// Scaled dot-product attention over already-projected q[Tq x d], k[Tk x d],
// v[Tk x d], split into `heads` column groups. mask (row-major Tq x Tk,
// nonzero = attend) may be empty; masked scores get -1e30 before softmax.
Var MultiHeadAttention(const Var &q, const Var &k, const Var &v, int heads,
                       std::span<const unsigned char> mask = {});

struct LstmState {
  Var h;  // [1 x H]
  Var c;  // [1 x H]
};

struct LstmParams {
  Var w_ih;  // [4H x in], gate order i, f, g, o
  Var w_hh;  // [4H x H]
  Var bias;  // [4H]
};

LstmState LstmZeroState(int hidden);
// One step on x[1 x in]; the returned state's h is also the output.
LstmState LstmStep(const Var &x, const LstmState &state, const LstmParams &p);

}  // namespace pmu

#endif  // PMU_CORE_OPS_H_
