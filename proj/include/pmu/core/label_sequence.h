// pmu/core/label_sequence.h

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

#ifndef PMU_CORE_LABEL_SEQUENCE_H_
#define PMU_CORE_LABEL_SEQUENCE_H_

#include <vector>

namespace pmu {

// Id of the blank symbol in every vocabulary.
inline constexpr int kBlankId = 0;

// Target unit ids (never blank). `unk_count` records how many unknown-unit
// ids the tokenizer had to emit.
struct LabelSequence {
  std::vector<int> ids;
  int unk_count = 0;

  int size() const { return static_cast<int>(ids.size()); }
  bool operator==(const LabelSequence &) const = default;
};

}  // namespace pmu

#endif  // PMU_CORE_LABEL_SEQUENCE_H_
