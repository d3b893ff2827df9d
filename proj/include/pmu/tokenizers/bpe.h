// pmu/tokenizers/bpe.h

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

#ifndef PMU_TOKENIZERS_BPE_H_
#define PMU_TOKENIZERS_BPE_H_

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "pmu/tokenizers/tokenizer.h"

namespace pmu {

// Byte-pair-encoding model over characters plus a word-end marker.
class BpeModel : public Tokenizer {
 public:
  using Merge = std::pair<std::string, std::string>;

  BpeModel(std::vector<std::string> seed, std::vector<Merge> merges,
           std::string marker = kWordEndMarker);

  const std::vector<Merge> &merges() const { return merges_; }
  // Single characters seen in training, plus the marker.
  const std::vector<std::string> &seed() const { return seed_; }
  const std::string &word_end_marker() const { return marker_; }

  const Vocabulary &vocab() const override { return vocab_; }
  // Applies the merges in order; the last unit carries the marker.
  std::vector<std::string> SegmentWord(const std::string &word) const override;
  void Save(std::ostream &os) const override;
  std::string kind() const override { return "bpe"; }

  static BpeModel Load(std::istream &is);

 private:
  std::vector<std::string> seed_;
  std::vector<Merge> merges_;
  std::string marker_;
  Vocabulary vocab_;
};

// Greedy most-frequent-pair merging over the normalized words of `lines`.
// Ties go to the pair whose first occurrence comes earliest in corpus scan
// order, then to the lexicographically smaller pair. Stops early when no
// pair is left. Throws InputError on an empty corpus.
BpeModel TrainBpe(const std::vector<std::string> &lines, int num_merges);

}  // namespace pmu

#endif  // PMU_TOKENIZERS_BPE_H_
