// pmu/tokenizers/vocabulary.h

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

#ifndef PMU_TOKENIZERS_VOCABULARY_H_
#define PMU_TOKENIZERS_VOCABULARY_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "pmu/core/label_sequence.h"

namespace pmu {

inline constexpr const char *kBlankSymbol = "<blank>";
inline constexpr const char *kUnkSymbol = "<unk>";
inline constexpr const char *kWordEndMarker = "_";

// Dense unit inventory. With a blank, ids are blank = 0, unk = 1, then the
// text units in sorted order.
class Vocabulary {
 public:
  Vocabulary() = default;

  int size() const { return static_cast<int>(units_.size()); }
  int blank_id() const { return blank_id_; }
  int unk_id() const { return unk_id_; }
  const std::vector<std::string> &units() const { return units_; }
  const std::string &unit(int id) const { return units_.at(id); }
  // unk_id() when absent.
  int IdOf(const std::string &unit) const;
  bool Contains(const std::string &unit) const { return id_of_.count(unit) > 0; }

  bool operator==(const Vocabulary &other) const { return units_ == other.units_; }

 private:
  friend Vocabulary BuildVocab(std::vector<std::string> units, bool include_blank);
  std::vector<std::string> units_;
  std::map<std::string, int> id_of_;
  int blank_id_ = -1;
  int unk_id_ = -1;
};

// Deduplicates and sorts `units`; reserved symbols in the input are ignored.
Vocabulary BuildVocab(std::vector<std::string> units, bool include_blank = true);

// Concatenates unit strings, turning word-end markers into spaces. Blank ids
// are skipped and unk renders as "<unk>".
std::string DecodeUnits(const Vocabulary &vocab, std::span<const int> ids,
                        const std::string &marker = kWordEndMarker);

}  // namespace pmu

#endif  // PMU_TOKENIZERS_VOCABULARY_H_
