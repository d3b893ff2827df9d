// pmu/tokenizers/pasm.h

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

#ifndef PMU_TOKENIZERS_PASM_H_
#define PMU_TOKENIZERS_PASM_H_

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "pmu/tokenizers/aligner.h"
#include "pmu/tokenizers/lexicon.h"
#include "pmu/tokenizers/tokenizer.h"

namespace pmu {

// Phonetically induced subword inventory with a greedy longest-match
// segmenter. Words in running text are followed by the marker unit.
class PasmModel : public Tokenizer {
 public:
  // `inventory` maps subword -> corpus count; single characters may have
  // count 0. The marker is always part of the vocabulary.
  explicit PasmModel(std::map<std::string, long long> inventory,
                     std::string marker = kWordEndMarker);

  const std::map<std::string, long long> &inventory() const { return inventory_; }
  const std::string &word_end_marker() const { return marker_; }

  const Vocabulary &vocab() const override { return vocab_; }
  // Longest match from the left; a character with no matching unit emits
  // "<unk>". The marker is not included.
  std::vector<std::string> SegmentWord(const std::string &word) const override;
  std::vector<std::string> WordUnits(const std::string &word) const override;
  void Save(std::ostream &os) const override;
  std::string kind() const override { return "pasm"; }

  static PasmModel Load(std::istream &is);

 private:
  std::map<std::string, long long> inventory_;
  std::string marker_;
  std::size_t max_len_ = 1;
  Vocabulary vocab_;
};

enum class PasmStatus { kOk, kCharFallback };

struct PasmResult {
  PasmModel model;
  PasmStatus status = PasmStatus::kOk;
  std::string warning;
};

// Letter spans of `word` that align to a contiguous phoneme group: each span
// holds one phoneme-bearing letter plus the silent letters after it (leading
// silent letters join the first span). Words without phonemes give no spans.
std::vector<std::string> ConsistentSpans(const AlignmentTable &table, const std::string &word,
                                         const std::vector<std::string> &phonemes);

// Mines consistent spans over the lexicon, counts them over the corpus word
// tokens found in the lexicon, keeps multi-letter spans with count >=
// min_count in order of decreasing count (ties lexicographic), and truncates
// so that the vocabulary, specials included, has at most target_size units
// (target_size <= 0 disables truncation). All characters of the lexicon and
// corpus are kept as back-off. If they do not fit in target_size the result
// is a character vocabulary with status kCharFallback.
PasmResult ExtractPasm(const AlignmentTable &table, const Lexicon &lexicon,
                       const std::vector<std::string> &corpus, int min_count, int target_size);

}  // namespace pmu

#endif  // PMU_TOKENIZERS_PASM_H_
