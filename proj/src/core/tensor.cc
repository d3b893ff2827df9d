// src/core/tensor.cc

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

#include "pmu/core/tensor.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmu/core/error.h"

namespace pmu {

std::string ShapeString(const Shape &shape) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
  os << "]";
  return os.str();
}

std::size_t NumElements(const Shape &shape) {
  std::size_t n = 1;
  for (int d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

static void CheckShape(const Shape &shape) {
  PMU_CHECK(!shape.empty(), "Tensor: empty shape");
  for (int d : shape)
    PMU_CHECK(d > 0, "Tensor: non-positive dimension in ", ShapeString(shape));
}

Tensor::Tensor(Shape shape, Real fill) : shape_(std::move(shape)) {
  CheckShape(shape_);
  data_.assign(NumElements(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<Real> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  CheckShape(shape_);
  PMU_CHECK(data_.size() == NumElements(shape_), "Tensor: shape ",
            ShapeString(shape_), " does not match ", data_.size(), " elements");
}

std::span<Real> Tensor::row(int r) {
  std::size_t cols = shape_.back();
  return {data_.data() + r * cols, cols};
}

std::span<const Real> Tensor::row(int r) const {
  std::size_t cols = shape_.back();
  return {data_.data() + r * cols, cols};
}

void Tensor::Fill(Real v) { std::fill(data_.begin(), data_.end(), v); }

Tensor Tensor::Reshaped(Shape shape) const {
  PMU_CHECK(NumElements(shape) == data_.size(), "reshape: ", ShapeString(shape_),
            " -> ", ShapeString(shape));
  return Tensor(std::move(shape), data_);
}

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](Real v) { return std::isfinite(v); });
}

}  // namespace pmu
