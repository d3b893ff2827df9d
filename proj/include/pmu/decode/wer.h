// pmu/decode/wer.h

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

#ifndef PMU_DECODE_WER_H_
#define PMU_DECODE_WER_H_

#include <string>

namespace pmu {

struct WerReport {
  long long substitutions = 0;
  long long insertions = 0;
  long long deletions = 0;
  long long ref_words = 0;
  double wer = 0;        // (S + I + D) / ref_words
  bool defined = true;   // false for an empty reference

  long long errors() const { return substitutions + insertions + deletions; }
  // Pools counts and recomputes wer.
  WerReport &operator+=(const WerReport &other);
  // "wer=... sub=... ins=... del=... ref_words=..."
  std::string ToString() const;
};

// Minimal-edit alignment of whitespace tokens of the normalized texts, unit
// costs. Traceback prefers match/substitution, then deletion, then
// insertion.
WerReport ComputeWer(const std::string &ref, const std::string &hyp);

}  // namespace pmu

#endif  // PMU_DECODE_WER_H_
