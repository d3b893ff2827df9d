// src/tokenizers/vocabulary.cc

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

#include "pmu/tokenizers/vocabulary.h"

#include <algorithm>

#include "pmu/core/error.h"
#include "pmu/tokenizers/text.h"

namespace pmu {

int Vocabulary::IdOf(const std::string &unit) const {
  auto it = id_of_.find(unit);
  return it == id_of_.end() ? unk_id_ : it->second;
}

Vocabulary BuildVocab(std::vector<std::string> units, bool include_blank) {
  std::erase_if(units, [](const std::string &u) {
    return u.empty() || u == kBlankSymbol || u == kUnkSymbol;
  });
  std::sort(units.begin(), units.end());
  units.erase(std::unique(units.begin(), units.end()), units.end());

  Vocabulary v;
  if (include_blank) v.units_.push_back(kBlankSymbol);
  v.units_.push_back(kUnkSymbol);
  v.units_.insert(v.units_.end(), units.begin(), units.end());
  for (int i = 0; i < v.size(); ++i) v.id_of_[v.units_[i]] = i;
  v.blank_id_ = include_blank ? 0 : -1;
  v.unk_id_ = include_blank ? 1 : 0;
  return v;
}

std::string DecodeUnits(const Vocabulary &vocab, std::span<const int> ids,
                        const std::string &marker) {
  std::string raw;
  for (int id : ids) {
    PMU_CHECK(id >= 0 && id < vocab.size(), "decode_units: id ", id, " outside vocabulary of ",
              vocab.size());
    if (id == vocab.blank_id()) continue;
    raw += vocab.unit(id);
  }
  if (!marker.empty()) {
    std::string spaced;
    for (std::size_t i = 0; i < raw.size();) {
      if (raw.compare(i, marker.size(), marker) == 0) {
        spaced.push_back(' ');
        i += marker.size();
      } else {
        spaced.push_back(raw[i++]);
      }
    }
    raw = std::move(spaced);
  }
  return JoinWords(SplitWords(raw));
}

}  // namespace pmu
