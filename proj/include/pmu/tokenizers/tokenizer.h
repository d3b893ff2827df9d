// pmu/tokenizers/tokenizer.h

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

#ifndef PMU_TOKENIZERS_TOKENIZER_H_
#define PMU_TOKENIZERS_TOKENIZER_H_

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "pmu/core/label_sequence.h"
#include "pmu/tokenizers/vocabulary.h"

namespace pmu {

// Text -> unit ids. Words are separated by a word-end marker unit, so
// DecodeUnits(vocab(), Encode(text).ids) == NormalizeText(text) whenever no
// unk was emitted.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual const Vocabulary &vocab() const = 0;
  virtual std::vector<std::string> SegmentWord(const std::string &word) const = 0;
  // Units emitted for one word inside running text, marker included.
  virtual std::vector<std::string> WordUnits(const std::string &word) const {
    return SegmentWord(word);
  }
  LabelSequence Encode(const std::string &text) const;
  virtual void Save(std::ostream &os) const = 0;
  virtual std::string kind() const = 0;

  std::string Decode(std::span<const int> ids) const { return DecodeUnits(vocab(), ids); }
  void SaveToFile(const std::string &path) const;
};

// Dispatches on the header line ("pmu-bpe v1" / "pmu-pasm v1").
std::unique_ptr<Tokenizer> LoadTokenizer(const std::string &path);

}  // namespace pmu

#endif  // PMU_TOKENIZERS_TOKENIZER_H_
