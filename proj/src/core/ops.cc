// src/core/ops.cc

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

#include "pmu/core/ops.h"

#include <algorithm>
#include <cmath>

#include "pmu/core/error.h"

namespace pmu {

namespace {

// C[M x N] += A[M x K] * B[K x N]
void GemmNN(int m, int n, int k, const Real *a, const Real *b, Real *c) {
  for (int i = 0; i < m; ++i) {
    Real *ci = c + static_cast<std::size_t>(i) * n;
    const Real *ai = a + static_cast<std::size_t>(i) * k;
    for (int p = 0; p < k; ++p) {
      const Real av = ai[p];
      if (av == 0) continue;
      const Real *bp = b + static_cast<std::size_t>(p) * n;
      for (int j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

// C[M x N] += A[M x K] * B[N x K]^T
void GemmNT(int m, int n, int k, const Real *a, const Real *b, Real *c) {
  for (int i = 0; i < m; ++i) {
    const Real *ai = a + static_cast<std::size_t>(i) * k;
    Real *ci = c + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      const Real *bj = b + static_cast<std::size_t>(j) * k;
      Real s = 0;
      for (int p = 0; p < k; ++p) s += ai[p] * bj[p];
      ci[j] += s;
    }
  }
}

// C[M x N] += A[K x M]^T * B[K x N]
void GemmTN(int m, int n, int k, const Real *a, const Real *b, Real *c) {
  for (int p = 0; p < k; ++p) {
    const Real *ap = a + static_cast<std::size_t>(p) * m;
    const Real *bp = b + static_cast<std::size_t>(p) * n;
    for (int i = 0; i < m; ++i) {
      const Real av = ap[i];
      if (av == 0) continue;
      Real *ci = c + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

void AccumulateInto(Node &parent, const Tensor &g) {
  if (!parent.requires_grad) return;
  Real *dst = parent.grad().ptr();
  const Real *src = g.ptr();
  for (std::size_t i = 0; i < g.size(); ++i) dst[i] += src[i];
}

void CheckSameShape(const char *op, const Var &a, const Var &b) {
  PMU_CHECK(a->value.shape() == b->value.shape(), op, ": shape mismatch ",
            ShapeString(a->value.shape()), " vs ", ShapeString(b->value.shape()));
}

void CheckRank(const char *op, const Var &x, int rank) {
  PMU_CHECK(x->value.rank() == rank, op, ": expected rank ", rank, ", got ",
            ShapeString(x->value.shape()));
}

int NormalizeAxis(const char *op, const Shape &shape, int axis) {
  int r = static_cast<int>(shape.size());
  if (axis < 0) axis += r;
  PMU_CHECK(axis >= 0 && axis < r, op, ": axis ", axis, " invalid for ", ShapeString(shape));
  return axis;
}

// (outer, n, inner) decomposition around an axis.
struct AxisLayout {
  std::size_t outer = 1, n = 1, inner = 1;
};

AxisLayout Layout(const Shape &shape, int axis) {
  AxisLayout l;
  for (int i = 0; i < axis; ++i) l.outer *= shape[i];
  l.n = shape[axis];
  for (std::size_t i = axis + 1; i < shape.size(); ++i) l.inner *= shape[i];
  return l;
}

Real SigmoidScalar(Real x) {
  if (x >= 0) return 1 / (1 + std::exp(-x));
  Real e = std::exp(x);
  return e / (1 + e);
}

}  // namespace

Var Add(const Var &a, const Var &b) {
  CheckSameShape("add", a, b);
  Tensor out = a->value;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b->value[i];
  return MakeNode(std::move(out), "add", {a, b}, [](Node &self) {
    AccumulateInto(*self.parents[0], self.grad());
    AccumulateInto(*self.parents[1], self.grad());
  });
}

Var Sub(const Var &a, const Var &b) {
  CheckSameShape("sub", a, b);
  Tensor out = a->value;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b->value[i];
  return MakeNode(std::move(out), "sub", {a, b}, [](Node &self) {
    AccumulateInto(*self.parents[0], self.grad());
    Node &b = *self.parents[1];
    if (!b.requires_grad) return;
    const Tensor &g = self.grad();
    for (std::size_t i = 0; i < g.size(); ++i) b.grad()[i] -= g[i];
  });
}

Var Mul(const Var &a, const Var &b) {
  CheckSameShape("mul", a, b);
  Tensor out = a->value;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b->value[i];
  return MakeNode(std::move(out), "mul", {a, b}, [](Node &self) {
    Node &a = *self.parents[0];
    Node &b = *self.parents[1];
    const Tensor &g = self.grad();
    if (a.requires_grad)
      for (std::size_t i = 0; i < g.size(); ++i) a.grad()[i] += g[i] * b.value[i];
    if (b.requires_grad)
      for (std::size_t i = 0; i < g.size(); ++i) b.grad()[i] += g[i] * a.value[i];
  });
}

Var Scale(const Var &a, Real s) {
  Tensor out = a->value;
  for (Real &v : out.vec()) v *= s;
  return MakeNode(std::move(out), "scale", {a}, [s](Node &self) {
    Node &a = *self.parents[0];
    const Tensor &g = self.grad();
    for (std::size_t i = 0; i < g.size(); ++i) a.grad()[i] += s * g[i];
  });
}

Var AddRowVector(const Var &x, const Var &b) {
  CheckRank("add_row_vector", x, 2);
  const int rows = x->value.dim(0), cols = x->value.dim(1);
  PMU_CHECK(b->value.size() == static_cast<std::size_t>(cols),
            "add_row_vector: bias ", ShapeString(b->value.shape()), " vs input ",
            ShapeString(x->value.shape()));
  Tensor out = x->value;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out.at(r, c) += b->value[c];
  return MakeNode(std::move(out), "add_row_vector", {x, b}, [rows, cols](Node &self) {
    AccumulateInto(*self.parents[0], self.grad());
    Node &b = *self.parents[1];
    if (!b.requires_grad) return;
    const Tensor &g = self.grad();
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) b.grad()[c] += g.at(r, c);
  });
}

Var MatMul(const Var &a, const Var &b) {
  CheckRank("matmul", a, 2);
  CheckRank("matmul", b, 2);
  const int m = a->value.dim(0), k = a->value.dim(1), n = b->value.dim(1);
  PMU_CHECK(b->value.dim(0) == k, "matmul: inner dims differ ",
            ShapeString(a->value.shape()), " * ", ShapeString(b->value.shape()));
  Tensor out({m, n}, 0);
  GemmNN(m, n, k, a->value.ptr(), b->value.ptr(), out.ptr());
  return MakeNode(std::move(out), "matmul", {a, b}, [m, n, k](Node &self) {
    Node &a = *self.parents[0];
    Node &b = *self.parents[1];
    const Real *g = self.grad().ptr();
    if (a.requires_grad) GemmNT(m, k, n, g, b.value.ptr(), a.grad().ptr());
    if (b.requires_grad) GemmTN(k, n, m, a.value.ptr(), g, b.grad().ptr());
  });
}

Var MatMulNT(const Var &a, const Var &b) {
  CheckRank("matmul_nt", a, 2);
  CheckRank("matmul_nt", b, 2);
  const int m = a->value.dim(0), k = a->value.dim(1), n = b->value.dim(0);
  PMU_CHECK(b->value.dim(1) == k, "matmul_nt: inner dims differ ",
            ShapeString(a->value.shape()), " * ", ShapeString(b->value.shape()), "^T");
  Tensor out({m, n}, 0);
  GemmNT(m, n, k, a->value.ptr(), b->value.ptr(), out.ptr());
  return MakeNode(std::move(out), "matmul_nt", {a, b}, [m, n, k](Node &self) {
    Node &a = *self.parents[0];
    Node &b = *self.parents[1];
    const Real *g = self.grad().ptr();
    if (a.requires_grad) GemmNN(m, k, n, g, b.value.ptr(), a.grad().ptr());
    if (b.requires_grad) GemmTN(n, k, m, g, a.value.ptr(), b.grad().ptr());
  });
}

Var Linear(const Var &x, const Var &weight, const Var &bias) {
  CheckRank("linear", x, 2);
  CheckRank("linear", weight, 2);
  const int rows = x->value.dim(0), in = x->value.dim(1), out_dim = weight->value.dim(0);
  PMU_CHECK(weight->value.dim(1) == in, "linear: input ", ShapeString(x->value.shape()),
            " incompatible with weight ", ShapeString(weight->value.shape()));
  if (bias)
    PMU_CHECK(bias->value.size() == static_cast<std::size_t>(out_dim), "linear: bias ",
              ShapeString(bias->value.shape()), " vs weight ",
              ShapeString(weight->value.shape()));
  Tensor out({rows, out_dim}, 0);
  if (bias)
    for (int r = 0; r < rows; ++r)
      std::copy(bias->value.ptr(), bias->value.ptr() + out_dim, out.row(r).data());
  GemmNT(rows, out_dim, in, x->value.ptr(), weight->value.ptr(), out.ptr());
  std::vector<Var> parents{x, weight};
  if (bias) parents.push_back(bias);
  return MakeNode(std::move(out), "linear", std::move(parents),
                  [rows, in, out_dim](Node &self) {
                    Node &x = *self.parents[0];
                    Node &w = *self.parents[1];
                    const Real *g = self.grad().ptr();
                    if (x.requires_grad) GemmNN(rows, in, out_dim, g, w.value.ptr(), x.grad().ptr());
                    if (w.requires_grad) GemmTN(out_dim, in, rows, g, x.value.ptr(), w.grad().ptr());
                    if (self.parents.size() > 2 && self.parents[2]->requires_grad) {
                      Real *db = self.parents[2]->grad().ptr();
                      for (int r = 0; r < rows; ++r)
                        for (int c = 0; c < out_dim; ++c) db[c] += g[r * out_dim + c];
                    }
                  });
}

Var Sigmoid(const Var &x) {
  Tensor out = x->value;
  for (Real &v : out.vec()) v = SigmoidScalar(v);
  return MakeNode(std::move(out), "sigmoid", {x}, [](Node &self) {
    Node &x = *self.parents[0];
    const Tensor &g = self.grad();
    for (std::size_t i = 0; i < g.size(); ++i) {
      Real y = self.value[i];
      x.grad()[i] += g[i] * y * (1 - y);
    }
  });
}

Var Tanh(const Var &x) {
  Tensor out = x->value;
  for (Real &v : out.vec()) v = std::tanh(v);
  return MakeNode(std::move(out), "tanh", {x}, [](Node &self) {
    Node &x = *self.parents[0];
    const Tensor &g = self.grad();
    for (std::size_t i = 0; i < g.size(); ++i) {
      Real y = self.value[i];
      x.grad()[i] += g[i] * (1 - y * y);
    }
  });
}

Var Swish(const Var &x) {
  Tensor out = x->value;
  for (Real &v : out.vec()) v = v * SigmoidScalar(v);
  return MakeNode(std::move(out), "swish", {x}, [](Node &self) {
    Node &x = *self.parents[0];
    const Tensor &g = self.grad();
    for (std::size_t i = 0; i < g.size(); ++i) {
      Real xv = x.value[i];
      Real s = SigmoidScalar(xv);
      x.grad()[i] += g[i] * (s + xv * s * (1 - s));
    }
  });
}

Var Glu(const Var &x) {
  const Shape &shape = x->value.shape();
  PMU_CHECK(shape.back() % 2 == 0, "glu: last dim must be even, got ", ShapeString(shape));
  const std::size_t half = shape.back() / 2;
  const std::size_t rows = x->value.size() / shape.back();
  Shape out_shape = shape;
  out_shape.back() = static_cast<int>(half);
  Tensor out(out_shape, 0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < half; ++c) {
      const Real *xr = x->value.ptr() + r * 2 * half;
      out[r * half + c] = xr[c] * SigmoidScalar(xr[half + c]);
    }
  return MakeNode(std::move(out), "glu", {x}, [rows, half](Node &self) {
    Node &x = *self.parents[0];
    const Tensor &g = self.grad();
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < half; ++c) {
        const Real *xr = x.value.ptr() + r * 2 * half;
        Real *dx = x.grad().ptr() + r * 2 * half;
        Real s = SigmoidScalar(xr[half + c]);
        Real gv = g[r * half + c];
        dx[c] += gv * s;
        dx[half + c] += gv * xr[c] * s * (1 - s);
      }
  });
}

namespace {

template <bool kLog>
Var SoftmaxImpl(const Var &x, int axis, const char *op) {
  axis = NormalizeAxis(op, x->value.shape(), axis);
  const AxisLayout l = Layout(x->value.shape(), axis);
  Tensor out = x->value;
  for (std::size_t o = 0; o < l.outer; ++o)
    for (std::size_t in = 0; in < l.inner; ++in) {
      Real *base = out.ptr() + o * l.n * l.inner + in;
      Real mx = base[0];
      for (std::size_t i = 1; i < l.n; ++i) mx = std::max(mx, base[i * l.inner]);
      Real sum = 0;
      for (std::size_t i = 0; i < l.n; ++i) sum += std::exp(base[i * l.inner] - mx);
      if (kLog) {
        const Real lse = mx + std::log(sum);
        for (std::size_t i = 0; i < l.n; ++i) base[i * l.inner] -= lse;
      } else {
        for (std::size_t i = 0; i < l.n; ++i)
          base[i * l.inner] = std::exp(base[i * l.inner] - mx) / sum;
      }
    }
  return MakeNode(std::move(out), op, {x}, [l](Node &self) {
    Node &x = *self.parents[0];
    const Tensor &g = self.grad();
    Tensor &dx = x.grad();
    for (std::size_t o = 0; o < l.outer; ++o)
      for (std::size_t in = 0; in < l.inner; ++in) {
        const std::size_t off = o * l.n * l.inner + in;
        if (kLog) {
          // dx = dy - softmax * sum(dy)
          Real gsum = 0;
          for (std::size_t i = 0; i < l.n; ++i) gsum += g[off + i * l.inner];
          for (std::size_t i = 0; i < l.n; ++i) {
            std::size_t idx = off + i * l.inner;
            dx[idx] += g[idx] - std::exp(self.value[idx]) * gsum;
          }
        } else {
          // dx = y * (dy - sum(dy * y))
          Real dot = 0;
          for (std::size_t i = 0; i < l.n; ++i) {
            std::size_t idx = off + i * l.inner;
            dot += g[idx] * self.value[idx];
          }
          for (std::size_t i = 0; i < l.n; ++i) {
            std::size_t idx = off + i * l.inner;
            dx[idx] += self.value[idx] * (g[idx] - dot);
          }
        }
      }
  });
}

}  // namespace

Var Softmax(const Var &x, int axis) { return SoftmaxImpl<false>(x, axis, "softmax"); }
Var LogSoftmax(const Var &x, int axis) { return SoftmaxImpl<true>(x, axis, "log_softmax"); }

Var LayerNorm(const Var &x, const Var &gain, const Var &bias, Real eps) {
  const Shape &shape = x->value.shape();
  const std::size_t n = shape.back();
  const std::size_t rows = x->value.size() / n;
  PMU_CHECK(gain->value.size() == n && bias->value.size() == n, "layer_norm: input ",
            ShapeString(shape), " vs gain ", ShapeString(gain->value.shape()), " bias ",
            ShapeString(bias->value.shape()));
  Tensor out(shape, 0);
  auto xhat = std::make_shared<std::vector<Real>>(x->value.size());
  auto rstd = std::make_shared<std::vector<Real>>(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const Real *xr = x->value.ptr() + r * n;
    Real mean = 0;
    for (std::size_t i = 0; i < n; ++i) mean += xr[i];
    mean /= n;
    Real var = 0;
    for (std::size_t i = 0; i < n; ++i) var += (xr[i] - mean) * (xr[i] - mean);
    var /= n;
    const Real rs = 1 / std::sqrt(var + eps);
    (*rstd)[r] = rs;
    for (std::size_t i = 0; i < n; ++i) {
      Real h = (xr[i] - mean) * rs;
      (*xhat)[r * n + i] = h;
      out[r * n + i] = h * gain->value[i] + bias->value[i];
    }
  }
  return MakeNode(std::move(out), "layer_norm", {x, gain, bias},
                  [rows, n, xhat, rstd](Node &self) {
                    Node &x = *self.parents[0];
                    Node &gain = *self.parents[1];
                    Node &bias = *self.parents[2];
                    const Tensor &g = self.grad();
                    std::vector<Real> dh(n);
                    for (std::size_t r = 0; r < rows; ++r) {
                      const Real *gr = g.ptr() + r * n;
                      const Real *hr = xhat->data() + r * n;
                      if (gain.requires_grad)
                        for (std::size_t i = 0; i < n; ++i) gain.grad()[i] += gr[i] * hr[i];
                      if (bias.requires_grad)
                        for (std::size_t i = 0; i < n; ++i) bias.grad()[i] += gr[i];
                      if (!x.requires_grad) continue;
                      Real sum_dh = 0, sum_dh_h = 0;
                      for (std::size_t i = 0; i < n; ++i) {
                        dh[i] = gr[i] * gain.value[i];
                        sum_dh += dh[i];
                        sum_dh_h += dh[i] * hr[i];
                      }
                      Real *dx = x.grad().ptr() + r * n;
                      const Real scale = (*rstd)[r] / static_cast<Real>(n);
                      for (std::size_t i = 0; i < n; ++i)
                        dx[i] += scale * (n * dh[i] - sum_dh - hr[i] * sum_dh_h);
                    }
                  });
}

Var DepthwiseConv1d(const Var &x, const Var &kernel, const Var &bias) {
  CheckRank("depthwise_conv1d", x, 2);
  CheckRank("depthwise_conv1d", kernel, 2);
  const int t_len = x->value.dim(0), ch = x->value.dim(1), k = kernel->value.dim(1);
  PMU_CHECK(kernel->value.dim(0) == ch, "depthwise_conv1d: kernel ",
            ShapeString(kernel->value.shape()), " vs input ", ShapeString(x->value.shape()));
  PMU_CHECK(k % 2 == 1, "depthwise_conv1d: kernel width must be odd, got ", k);
  if (bias)
    PMU_CHECK(bias->value.size() == static_cast<std::size_t>(ch), "depthwise_conv1d: bias ",
              ShapeString(bias->value.shape()), " vs channels ", ch);
  const int pad = (k - 1) / 2;
  Tensor out({t_len, ch}, 0);
  for (int t = 0; t < t_len; ++t)
    for (int c = 0; c < ch; ++c) {
      Real s = bias ? bias->value[c] : 0;
      for (int j = 0; j < k; ++j) {
        int src = t + j - pad;
        if (src < 0 || src >= t_len) continue;
        s += x->value.at(src, c) * kernel->value.at(c, j);
      }
      out.at(t, c) = s;
    }
  std::vector<Var> parents{x, kernel};
  if (bias) parents.push_back(bias);
  return MakeNode(std::move(out), "depthwise_conv1d", std::move(parents),
                  [t_len, ch, k, pad](Node &self) {
                    Node &x = *self.parents[0];
                    Node &w = *self.parents[1];
                    const Tensor &g = self.grad();
                    for (int t = 0; t < t_len; ++t)
                      for (int c = 0; c < ch; ++c) {
                        Real gv = g.at(t, c);
                        if (gv == 0) continue;
                        for (int j = 0; j < k; ++j) {
                          int src = t + j - pad;
                          if (src < 0 || src >= t_len) continue;
                          if (x.requires_grad) x.grad().at(src, c) += gv * w.value.at(c, j);
                          if (w.requires_grad) w.grad().at(c, j) += gv * x.value.at(src, c);
                        }
                      }
                    if (self.parents.size() > 2 && self.parents[2]->requires_grad) {
                      Tensor &db = self.parents[2]->grad();
                      for (int t = 0; t < t_len; ++t)
                        for (int c = 0; c < ch; ++c) db[c] += g.at(t, c);
                    }
                  });
}

Var Conv2d(const Var &x, const Var &weight, const Var &bias, int stride, int pad) {
  CheckRank("conv2d", x, 3);
  CheckRank("conv2d", weight, 4);
  const Shape &xs = x->value.shape();
  const Shape &ws = weight->value.shape();
  const int cin = xs[0], h = xs[1], w = xs[2];
  const int cout = ws[0], kh = ws[2], kw = ws[3];
  PMU_CHECK(ws[1] == cin, "conv2d: weight ", ShapeString(ws), " vs input ", ShapeString(xs));
  PMU_CHECK(stride >= 1 && pad >= 0, "conv2d: bad stride/pad ", stride, "/", pad);
  const int oh = (h + 2 * pad - kh) / stride + 1;
  const int ow = (w + 2 * pad - kw) / stride + 1;
  PMU_CHECK(h + 2 * pad >= kh && w + 2 * pad >= kw && oh > 0 && ow > 0,
            "conv2d: input ", ShapeString(xs), " too small for kernel ", ShapeString(ws));
  if (bias)
    PMU_CHECK(bias->value.size() == static_cast<std::size_t>(cout), "conv2d: bias ",
              ShapeString(bias->value.shape()), " vs out channels ", cout);
  Tensor out({cout, oh, ow}, 0);
  const Real *xp = x->value.ptr();
  const Real *wp = weight->value.ptr();
  for (int co = 0; co < cout; ++co)
    for (int i = 0; i < oh; ++i)
      for (int j = 0; j < ow; ++j) {
        Real s = bias ? bias->value[co] : 0;
        for (int ci = 0; ci < cin; ++ci)
          for (int a = 0; a < kh; ++a) {
            int r = i * stride + a - pad;
            if (r < 0 || r >= h) continue;
            for (int b = 0; b < kw; ++b) {
              int c = j * stride + b - pad;
              if (c < 0 || c >= w) continue;
              s += xp[(ci * h + r) * w + c] * wp[((co * cin + ci) * kh + a) * kw + b];
            }
          }
        out[(co * oh + i) * ow + j] = s;
      }
  std::vector<Var> parents{x, weight};
  if (bias) parents.push_back(bias);
  return MakeNode(
      std::move(out), "conv2d", std::move(parents),
      [=](Node &self) {
        Node &x = *self.parents[0];
        Node &wt = *self.parents[1];
        const Real *g = self.grad().ptr();
        Real *dx = x.requires_grad ? x.grad().ptr() : nullptr;
        Real *dw = wt.requires_grad ? wt.grad().ptr() : nullptr;
        const Real *xv = x.value.ptr();
        const Real *wv = wt.value.ptr();
        for (int co = 0; co < cout; ++co)
          for (int i = 0; i < oh; ++i)
            for (int j = 0; j < ow; ++j) {
              Real gv = g[(co * oh + i) * ow + j];
              if (gv == 0) continue;
              for (int ci = 0; ci < cin; ++ci)
                for (int a = 0; a < kh; ++a) {
                  int r = i * stride + a - pad;
                  if (r < 0 || r >= h) continue;
                  for (int b = 0; b < kw; ++b) {
                    int c = j * stride + b - pad;
                    if (c < 0 || c >= w) continue;
                    std::size_t xi = (ci * h + r) * w + c;
                    std::size_t wi = ((co * cin + ci) * kh + a) * kw + b;
                    if (dx) dx[xi] += gv * wv[wi];
                    if (dw) dw[wi] += gv * xv[xi];
                  }
                }
            }
        if (self.parents.size() > 2 && self.parents[2]->requires_grad) {
          Real *db = self.parents[2]->grad().ptr();
          for (int co = 0; co < cout; ++co)
            for (int p = 0; p < oh * ow; ++p) db[co] += g[co * oh * ow + p];
        }
      });
}

Var Reshape(const Var &x, Shape shape) {
  Tensor out = x->value.Reshaped(std::move(shape));
  return MakeNode(std::move(out), "reshape", {x}, [](Node &self) {
    AccumulateInto(*self.parents[0], self.grad());
  });
}

Var SliceCols(const Var &x, int start, int len) {
  CheckRank("slice_cols", x, 2);
  const int rows = x->value.dim(0), cols = x->value.dim(1);
  PMU_CHECK(start >= 0 && len > 0 && start + len <= cols, "slice_cols: [", start, ", ",
            start + len, ") out of ", ShapeString(x->value.shape()));
  Tensor out({rows, len}, 0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < len; ++c) out.at(r, c) = x->value.at(r, start + c);
  return MakeNode(std::move(out), "slice_cols", {x}, [rows, start, len](Node &self) {
    Node &x = *self.parents[0];
    const Tensor &g = self.grad();
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < len; ++c) x.grad().at(r, start + c) += g.at(r, c);
  });
}

Var SliceRows(const Var &x, int start, int len) {
  CheckRank("slice_rows", x, 2);
  const int rows = x->value.dim(0), cols = x->value.dim(1);
  PMU_CHECK(start >= 0 && len > 0 && start + len <= rows, "slice_rows: [", start, ", ",
            start + len, ") out of ", ShapeString(x->value.shape()));
  std::vector<Real> data(x->value.ptr() + static_cast<std::size_t>(start) * cols,
                         x->value.ptr() + static_cast<std::size_t>(start + len) * cols);
  return MakeNode(Tensor({len, cols}, std::move(data)), "slice_rows", {x},
                  [start, cols](Node &self) {
                    Node &x = *self.parents[0];
                    const Tensor &g = self.grad();
                    Real *dst = x.grad().ptr() + static_cast<std::size_t>(start) * cols;
                    for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i];
                  });
}

Var ConcatCols(const std::vector<Var> &parts) {
  PMU_CHECK(!parts.empty(), "concat_cols: no inputs");
  const int rows = parts[0]->value.dim(0);
  int total = 0;
  for (const Var &p : parts) {
    CheckRank("concat_cols", p, 2);
    PMU_CHECK(p->value.dim(0) == rows, "concat_cols: row mismatch ",
              ShapeString(p->value.shape()), " vs ", rows);
    total += p->value.dim(1);
  }
  Tensor out({rows, total}, 0);
  int off = 0;
  for (const Var &p : parts) {
    const int c = p->value.dim(1);
    for (int r = 0; r < rows; ++r)
      std::copy_n(p->value.row(r).data(), c, out.row(r).data() + off);
    off += c;
  }
  return MakeNode(std::move(out), "concat_cols", parts, [rows](Node &self) {
    const Tensor &g = self.grad();
    int off = 0;
    for (const Var &p : self.parents) {
      const int c = p->value.dim(1);
      if (p->requires_grad)
        for (int r = 0; r < rows; ++r)
          for (int j = 0; j < c; ++j) p->grad().at(r, j) += g.at(r, off + j);
      off += c;
    }
  });
}

Var ConcatRows(const std::vector<Var> &parts) {
  PMU_CHECK(!parts.empty(), "concat_rows: no inputs");
  const int cols = parts[0]->value.dim(1);
  int total = 0;
  std::vector<Real> data;
  for (const Var &p : parts) {
    CheckRank("concat_rows", p, 2);
    PMU_CHECK(p->value.dim(1) == cols, "concat_rows: column mismatch ",
              ShapeString(p->value.shape()), " vs ", cols);
    total += p->value.dim(0);
    data.insert(data.end(), p->value.vec().begin(), p->value.vec().end());
  }
  return MakeNode(Tensor({total, cols}, std::move(data)), "concat_rows", parts,
                  [](Node &self) {
                    const Tensor &g = self.grad();
                    std::size_t off = 0;
                    for (const Var &p : self.parents) {
                      const std::size_t n = p->value.size();
                      if (p->requires_grad) {
                        Real *dst = p->grad().ptr();
                        for (std::size_t i = 0; i < n; ++i) dst[i] += g[off + i];
                      }
                      off += n;
                    }
                  });
}

Var GatherRows(const Var &table, std::span<const int> ids) {
  CheckRank("gather_rows", table, 2);
  const int rows = table->value.dim(0), cols = table->value.dim(1);
  PMU_CHECK(!ids.empty(), "gather_rows: empty id list");
  for (int id : ids)
    PMU_CHECK(id >= 0 && id < rows, "gather_rows: id ", id, " out of range for table ",
              ShapeString(table->value.shape()));
  const int n = static_cast<int>(ids.size());
  Tensor out({n, cols}, 0);
  for (int i = 0; i < n; ++i) std::copy_n(table->value.row(ids[i]).data(), cols, out.row(i).data());
  std::vector<int> idv(ids.begin(), ids.end());
  return MakeNode(std::move(out), "gather_rows", {table}, [idv, cols](Node &self) {
    Node &t = *self.parents[0];
    const Tensor &g = self.grad();
    for (std::size_t i = 0; i < idv.size(); ++i)
      for (int c = 0; c < cols; ++c) t.grad().at(idv[i], c) += g.at(static_cast<int>(i), c);
  });
}

Var OuterAdd(const Var &a, const Var &b) {
  CheckRank("outer_add", a, 2);
  CheckRank("outer_add", b, 2);
  const int t_len = a->value.dim(0), u_len = b->value.dim(0), j = a->value.dim(1);
  PMU_CHECK(b->value.dim(1) == j, "outer_add: width mismatch ", ShapeString(a->value.shape()),
            " vs ", ShapeString(b->value.shape()));
  Tensor out({t_len, u_len, j}, 0);
  Real *o = out.ptr();
  for (int t = 0; t < t_len; ++t)
    for (int u = 0; u < u_len; ++u) {
      const Real *ar = a->value.ptr() + static_cast<std::size_t>(t) * j;
      const Real *br = b->value.ptr() + static_cast<std::size_t>(u) * j;
      for (int c = 0; c < j; ++c) *o++ = ar[c] + br[c];
    }
  return MakeNode(std::move(out), "outer_add", {a, b}, [t_len, u_len, j](Node &self) {
    Node &a = *self.parents[0];
    Node &b = *self.parents[1];
    const Real *g = self.grad().ptr();
    Real *da = a.requires_grad ? a.grad().ptr() : nullptr;
    Real *db = b.requires_grad ? b.grad().ptr() : nullptr;
    for (int t = 0; t < t_len; ++t)
      for (int u = 0; u < u_len; ++u) {
        const Real *gr = g + (static_cast<std::size_t>(t) * u_len + u) * j;
        if (da)
          for (int c = 0; c < j; ++c) da[static_cast<std::size_t>(t) * j + c] += gr[c];
        if (db)
          for (int c = 0; c < j; ++c) db[static_cast<std::size_t>(u) * j + c] += gr[c];
      }
  });
}

Var SwapAxes01(const Var &x) {
  CheckRank("swap_axes01", x, 3);
  const int a = x->value.dim(0), b = x->value.dim(1), c = x->value.dim(2);
  auto permute = [](const Real *src, Real *dst, int a, int b, int c, bool accumulate) {
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) {
        const Real *s = src + (static_cast<std::size_t>(i) * b + j) * c;
        Real *d = dst + (static_cast<std::size_t>(j) * a + i) * c;
        for (int k = 0; k < c; ++k) d[k] = accumulate ? d[k] + s[k] : s[k];
      }
  };
  Tensor out({b, a, c}, 0);
  permute(x->value.ptr(), out.ptr(), a, b, c, false);
  return MakeNode(std::move(out), "swap_axes01", {x}, [a, b, c, permute](Node &self) {
    permute(self.grad().ptr(), self.parents[0]->grad().ptr(), b, a, c, true);
  });
}

Var Sum(const Var &x) {
  Real s = 0;
  for (Real v : x->value.vec()) s += v;
  return MakeNode(Tensor::Scalar(s), "sum", {x}, [](Node &self) {
    Node &x = *self.parents[0];
    const Real g = self.grad()[0];
    for (Real &d : x.grad().vec()) d += g;
  });
}

Var Mean(const Var &x) { return Scale(Sum(x), Real(1) / static_cast<Real>(x->value.size())); }

Var Dropout(const Var &x, Real p, std::mt19937_64 *rng) {
  PMU_CHECK(p >= 0 && p < 1, "dropout: rate ", p, " outside [0, 1)");
  if (rng == nullptr || p == 0) return x;
  std::bernoulli_distribution keep(1 - p);
  auto mask = std::make_shared<std::vector<Real>>(x->value.size());
  const Real scale = 1 / (1 - p);
  Tensor out = x->value;
  for (std::size_t i = 0; i < out.size(); ++i) {
    (*mask)[i] = keep(*rng) ? scale : 0;
    out[i] *= (*mask)[i];
  }
  return MakeNode(std::move(out), "dropout", {x}, [mask](Node &self) {
    Node &x = *self.parents[0];
    const Tensor &g = self.grad();
    for (std::size_t i = 0; i < g.size(); ++i) x.grad()[i] += g[i] * (*mask)[i];
  });
}

Var MultiHeadAttention(const Var &q, const Var &k, const Var &v, int heads,
                       std::span<const unsigned char> mask) {
  CheckRank("multi_head_attention", q, 2);
  CheckRank("multi_head_attention", k, 2);
  CheckRank("multi_head_attention", v, 2);
  const int tq = q->value.dim(0), tk = k->value.dim(0), d = q->value.dim(1);
  PMU_CHECK(heads > 0 && d % heads == 0, "multi_head_attention: dim ", d,
            " not divisible by heads ", heads);
  PMU_CHECK(k->value.dim(1) == d && v->value.dim(1) == d && v->value.dim(0) == tk,
            "multi_head_attention: q ", ShapeString(q->value.shape()), " k ",
            ShapeString(k->value.shape()), " v ", ShapeString(v->value.shape()));
  PMU_CHECK(mask.empty() || mask.size() == static_cast<std::size_t>(tq) * tk,
            "multi_head_attention: mask size ", mask.size(), " vs ", tq, "x", tk);
  Var bias;
  if (!mask.empty()) {
    Tensor b({tq, tk}, 0);
    for (std::size_t i = 0; i < mask.size(); ++i) b[i] = mask[i] ? 0 : Real(-1e30);
    bias = Constant(std::move(b));
  }
  const int dk = d / heads;
  const Real scale = 1 / std::sqrt(static_cast<Real>(dk));
  std::vector<Var> outs;
  outs.reserve(heads);
  for (int h = 0; h < heads; ++h) {
    Var qh = heads == 1 ? q : SliceCols(q, h * dk, dk);
    Var kh = heads == 1 ? k : SliceCols(k, h * dk, dk);
    Var vh = heads == 1 ? v : SliceCols(v, h * dk, dk);
    Var scores = Scale(MatMulNT(qh, kh), scale);
    if (bias) scores = Add(scores, bias);
    outs.push_back(MatMul(Softmax(scores, -1), vh));
  }
  return heads == 1 ? outs[0] : ConcatCols(outs);
}

LstmState LstmZeroState(int hidden) {
  return {Constant(Tensor({1, hidden}, 0)), Constant(Tensor({1, hidden}, 0))};
}

LstmState LstmStep(const Var &x, const LstmState &state, const LstmParams &p) {
  const int hidden = state.h->value.dim(1);
  PMU_CHECK(p.w_ih->value.dim(0) == 4 * hidden && p.w_hh->value.dim(0) == 4 * hidden &&
                p.w_hh->value.dim(1) == hidden,
            "lstm_step: weights ", ShapeString(p.w_ih->value.shape()), " / ",
            ShapeString(p.w_hh->value.shape()), " vs hidden ", hidden);
  Var gates = Add(Linear(x, p.w_ih, p.bias), MatMulNT(state.h, p.w_hh));
  Var i = Sigmoid(SliceCols(gates, 0, hidden));
  Var f = Sigmoid(SliceCols(gates, hidden, hidden));
  Var g = Tanh(SliceCols(gates, 2 * hidden, hidden));
  Var o = Sigmoid(SliceCols(gates, 3 * hidden, hidden));
  Var c = Add(Mul(f, state.c), Mul(i, g));
  Var h = Mul(o, Tanh(c));
  return {h, c};
}

}  // namespace pmu
