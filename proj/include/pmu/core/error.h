// pmu/core/error.h

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

#ifndef PMU_CORE_ERROR_H_
#define PMU_CORE_ERROR_H_

#include <sstream>
#include <stdexcept>
#include <string>

namespace pmu {

// Violated pre-condition of an operation (shape mismatch, bad index, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Bad user-provided input: empty corpus, invalid config value, ...
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file. `offset` is the byte (or line, for text formats) where
// parsing stopped.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string &what, long long offset)
      : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  long long offset() const { return offset_; }

 private:
  long long offset_;
};

namespace internal {

template <typename... Args>
std::string Concat(const Args &...args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

}  // namespace internal
}  // namespace pmu

#define PMU_CHECK(cond, ...)                                              \
  do {                                                                    \
    if (!(cond))                                                          \
      throw ::pmu::ContractError(::pmu::internal::Concat(__VA_ARGS__));   \
  } while (0)

#define PMU_INPUT_CHECK(cond, ...)                                        \
  do {                                                                    \
    if (!(cond))                                                          \
      throw ::pmu::InputError(::pmu::internal::Concat(__VA_ARGS__));      \
  } while (0)

#endif  // PMU_CORE_ERROR_H_
