// pmu/core/param_store.h

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

#ifndef PMU_CORE_PARAM_STORE_H_
#define PMU_CORE_PARAM_STORE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pmu/core/autograd.h"

namespace pmu {

enum class Init { kZero, kOne, kUniformFanIn };

// Named parameters. A path may alias another path, in which case both
// resolve to the same Node; this is how tied layers are expressed.
class ParamStore {
 public:
  explicit ParamStore(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Creates a parameter. The initial value depends only on (seed, path), so
  // adding or removing unrelated parameters never perturbs it. Frozen
  // parameters are excluded from Trainable() and never require grad.
  Var Create(const std::string &path, Shape shape, Init init, bool frozen = false);
  // Makes `path` resolve to the same Node as `target`.
  void Alias(const std::string &path, const std::string &target);

  bool Contains(const std::string &path) const;
  const Var &Get(const std::string &path) const;
  // Canonical path that `path` resolves to (itself unless aliased).
  const std::string &Canonical(const std::string &path) const;

  // All paths in lexicographic order, aliases included.
  std::vector<std::string> Paths() const;
  // Canonical, non-frozen parameters in path order.
  std::vector<std::pair<std::string, Var>> Trainable() const;
  bool IsFrozen(const std::string &path) const;

  void ZeroGrad();
  std::size_t NumTrainableValues() const;

  // Deep copy with fresh Nodes, preserving aliasing and frozen flags.
  // Used to give each worker its own tape.
  ParamStore Shadow() const;

 private:
  struct Entry {
    Var node;
    std::string canonical;
    bool frozen = false;
  };
  std::uint64_t seed_;
  std::map<std::string, Entry> entries_;
};

// Deterministic 64-bit hash (FNV-1a) of a string mixed with a seed.
std::uint64_t HashSeed(std::uint64_t seed, const std::string &key);

}  // namespace pmu

#endif  // PMU_CORE_PARAM_STORE_H_
