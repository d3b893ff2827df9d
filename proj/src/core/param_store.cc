// src/core/param_store.cc

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

#include "pmu/core/param_store.h"

#include <cmath>
#include <random>

#include "pmu/core/error.h"

namespace pmu {

std::uint64_t HashSeed(std::uint64_t seed, const std::string &key) {
  std::uint64_t h = 1469598103934665603ull ^ (seed * 0x9E3779B97F4A7C15ull);
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ull;
  }
  // splitmix finalizer
  h ^= h >> 30;
  h *= 0xBF58476D1CE4E5B9ull;
  h ^= h >> 27;
  h *= 0x94D049BB133111EBull;
  h ^= h >> 31;
  return h;
}

Var ParamStore::Create(const std::string &path, Shape shape, Init init, bool frozen) {
  PMU_CHECK(!entries_.count(path), "ParamStore: duplicate parameter path '", path, "'");
  Tensor value(shape, 0);
  switch (init) {
    case Init::kZero:
      break;
    case Init::kOne:
      value.Fill(1);
      break;
    case Init::kUniformFanIn: {
      std::size_t fan_in = 1;
      for (std::size_t i = 1; i < shape.size(); ++i) fan_in *= shape[i];
      const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
      std::mt19937_64 rng(HashSeed(seed_, path));
      std::uniform_real_distribution<double> dist(-bound, bound);
      for (Real &v : value.vec()) v = static_cast<Real>(dist(rng));
      break;
    }
  }
  Var node = Leaf(std::move(value), !frozen);
  entries_[path] = Entry{node, path, frozen};
  return node;
}

void ParamStore::Alias(const std::string &path, const std::string &target) {
  PMU_CHECK(!entries_.count(path), "ParamStore: alias path '", path, "' already exists");
  auto it = entries_.find(target);
  PMU_CHECK(it != entries_.end(), "ParamStore: alias target '", target, "' missing");
  Entry e = it->second;
  entries_[path] = e;
}

bool ParamStore::Contains(const std::string &path) const { return entries_.count(path) > 0; }

const Var &ParamStore::Get(const std::string &path) const {
  auto it = entries_.find(path);
  PMU_CHECK(it != entries_.end(), "ParamStore: unknown parameter '", path, "'");
  return it->second.node;
}

const std::string &ParamStore::Canonical(const std::string &path) const {
  auto it = entries_.find(path);
  PMU_CHECK(it != entries_.end(), "ParamStore: unknown parameter '", path, "'");
  return it->second.canonical;
}

std::vector<std::string> ParamStore::Paths() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto &[path, e] : entries_) out.push_back(path);
  return out;
}

std::vector<std::pair<std::string, Var>> ParamStore::Trainable() const {
  std::vector<std::pair<std::string, Var>> out;
  for (const auto &[path, e] : entries_)
    if (e.canonical == path && !e.frozen) out.emplace_back(path, e.node);
  return out;
}

bool ParamStore::IsFrozen(const std::string &path) const {
  auto it = entries_.find(path);
  PMU_CHECK(it != entries_.end(), "ParamStore: unknown parameter '", path, "'");
  return it->second.frozen;
}

void ParamStore::ZeroGrad() {
  for (auto &[path, e] : entries_) e.node->ZeroGrad();
}

std::size_t ParamStore::NumTrainableValues() const {
  std::size_t n = 0;
  for (const auto &[path, v] : Trainable()) n += v->value.size();
  return n;
}

ParamStore ParamStore::Shadow() const {
  ParamStore copy(seed_);
  std::map<std::string, Var> fresh;
  for (const auto &[path, e] : entries_)
    if (e.canonical == path) fresh[path] = Leaf(e.node->value, !e.frozen);
  for (const auto &[path, e] : entries_)
    copy.entries_[path] = Entry{fresh.at(e.canonical), e.canonical, e.frozen};
  return copy;
}

}  // namespace pmu
