// pmu/core/tensor.h

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

#ifndef PMU_CORE_TENSOR_H_
#define PMU_CORE_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace pmu {

// Element type of all model tensors. 64-bit unless the build enables
// PMU_REAL_FLOAT (faster, but the oracle tolerances assume double).
#ifdef PMU_REAL_FLOAT
using Real = float;
#else
using Real = double;
#endif

using Shape = std::vector<int>;

std::string ShapeString(const Shape &shape);
std::size_t NumElements(const Shape &shape);

// Dense row-major array. Value type: copies are deep.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, Real fill = 0);
  Tensor(Shape shape, std::vector<Real> data);

  static Tensor Scalar(Real v) { return Tensor({1}, {v}); }

  const Shape &shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_[i]; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  Real *ptr() { return data_.data(); }
  const Real *ptr() const { return data_.data(); }
  std::span<Real> data() { return data_; }
  std::span<const Real> data() const { return data_; }
  std::vector<Real> &vec() { return data_; }
  const std::vector<Real> &vec() const { return data_; }

  Real &operator[](std::size_t i) { return data_[i]; }
  Real operator[](std::size_t i) const { return data_[i]; }
  // 2-D access; no bounds checking.
  Real &at(int r, int c) { return data_[static_cast<std::size_t>(r) * shape_.back() + c]; }
  Real at(int r, int c) const { return data_[static_cast<std::size_t>(r) * shape_.back() + c]; }

  // Row `r` of a rank-2 tensor.
  std::span<Real> row(int r);
  std::span<const Real> row(int r) const;

  void Fill(Real v);
  // Same data, new shape with equal element count.
  Tensor Reshaped(Shape shape) const;

  bool AllFinite() const;

  bool operator==(const Tensor &other) const = default;

 private:
  Shape shape_;
  std::vector<Real> data_;
};

}  // namespace pmu

#endif  // PMU_CORE_TENSOR_H_
