// pmu/core/autograd.h

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

#ifndef PMU_CORE_AUTOGRAD_H_
#define PMU_CORE_AUTOGRAD_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "pmu/core/tensor.h"

namespace pmu {

struct Node;
using Var = std::shared_ptr<Node>;

// One vertex of the reverse-mode tape. Parents are the inputs of the
// producing operation; `backward_fn` reads this node's grad and adds the
// contribution to each parent's grad.
struct Node {
  std::int64_t id = 0;
  Tensor value;
  const char *op = "leaf";
  bool requires_grad = false;
  std::vector<Var> parents;
  std::function<void(Node &)> backward_fn;

  // Zero-initialized on first access, same shape as value.
  Tensor &grad();
  const Tensor &grad() const;
  bool has_grad() const { return !grad_.empty(); }
  void ZeroGrad();

 private:
  mutable Tensor grad_;
};

std::int64_t NextNodeId();

// Trainable (or differentiable input) leaf.
Var Leaf(Tensor value, bool requires_grad = true);
// Non-differentiable input.
Var Constant(Tensor value);

// Creates an interior node. If no parent requires grad (or recording is
// disabled by NoGradGuard) the parents and backward function are dropped.
Var MakeNode(Tensor value, const char *op, std::vector<Var> parents,
             std::function<void(Node &)> backward_fn);

// Accumulates d(root)/d(node) into every node reachable from root.
// root must hold a single element.
void Backward(const Var &root);

bool GradEnabled();

// Disables tape recording on the current thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard &) = delete;
  NoGradGuard &operator=(const NoGradGuard &) = delete;

 private:
  bool previous_;
};

}  // namespace pmu

#endif  // PMU_CORE_AUTOGRAD_H_
