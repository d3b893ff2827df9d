// src/core/autograd.cc

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

#include "pmu/core/autograd.h"

#include <atomic>
#include <unordered_set>

#include "pmu/core/error.h"

namespace pmu {

namespace {
std::atomic<std::int64_t> g_next_id{1};
thread_local bool t_grad_enabled = true;
}  // namespace

std::int64_t NextNodeId() { return g_next_id.fetch_add(1); }

Tensor &Node::grad() {
  if (grad_.empty()) grad_ = Tensor(value.shape(), 0);
  return grad_;
}

const Tensor &Node::grad() const {
  if (grad_.empty()) grad_ = Tensor(value.shape(), 0);
  return grad_;
}

void Node::ZeroGrad() {
  if (!grad_.empty()) grad_.Fill(0);
}

Var Leaf(Tensor value, bool requires_grad) {
  auto n = std::make_shared<Node>();
  n->id = NextNodeId();
  n->value = std::move(value);
  n->requires_grad = requires_grad;
  return n;
}

Var Constant(Tensor value) { return Leaf(std::move(value), false); }

Var MakeNode(Tensor value, const char *op, std::vector<Var> parents,
             std::function<void(Node &)> backward_fn) {
  auto n = std::make_shared<Node>();
  n->id = NextNodeId();
  n->value = std::move(value);
  n->op = op;
  if (!t_grad_enabled) return n;
  bool any = false;
  for (const Var &p : parents) any = any || p->requires_grad;
  if (!any) return n;
  n->requires_grad = true;
  n->parents = std::move(parents);
  n->backward_fn = std::move(backward_fn);
  return n;
}

void Backward(const Var &root) {
  PMU_CHECK(root->value.size() == 1, "backward: root must be scalar, got ",
            ShapeString(root->value.shape()));
  if (!root->requires_grad) return;

  // Iterative post-order DFS gives a topological order.
  std::vector<Node *> order;
  std::unordered_set<Node *> visited;
  std::vector<std::pair<Node *, std::size_t>> stack;
  stack.emplace_back(root.get(), 0);
  visited.insert(root.get());
  while (!stack.empty()) {
    auto &[node, next] = stack.back();
    if (next < node->parents.size()) {
      Node *p = node->parents[next++].get();
      if (p->requires_grad && visited.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  root->grad()[0] += 1;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node *n = *it;
    if (n->backward_fn && n->has_grad()) n->backward_fn(*n);
  }
}

bool GradEnabled() { return t_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(t_grad_enabled) { t_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { t_grad_enabled = previous_; }

}  // namespace pmu
