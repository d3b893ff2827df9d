// pmu/tokenizers/tokenizer_check.h

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

#ifndef PMU_TOKENIZERS_TOKENIZER_CHECK_H_
#define PMU_TOKENIZERS_TOKENIZER_CHECK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "pmu/tokenizers/lexicon.h"

namespace pmu {

// Random lowercase words of length 1..max_len over the first `alphabet`
// letters.
std::vector<std::string> RandomWords(int n, std::uint64_t seed, int alphabet = 8, int max_len = 7);

// Random lexicon with letter-named phonemes, some letters silent and some
// producing two phonemes.
Lexicon RandomLexicon(int num_words, std::uint64_t seed);

struct BpeSuiteReport {
  int words = 0;
  int round_trip_failures = 0;
  bool deterministic = false;
  bool ok() const { return deterministic && round_trip_failures == 0 && words > 0; }
};

// Trains twice on a fuzz corpus, compares merge lists, and checks the
// round-trip and concatenation laws on every word.
BpeSuiteReport CheckBpeSuite(int num_words, int num_merges, std::uint64_t seed);

struct PasmLawReport {
  int words = 0;
  int failures = 0;
  bool ok() const { return failures == 0 && words > 0; }
};

// Aligns `lexicon`, extracts PASM units over its words, and checks that the
// segmentation of every lexicon word concatenates back to the word.
PasmLawReport CheckPasmConcatenation(const Lexicon &lexicon, int iterations, int target_size);

struct EmReport {
  int lexicons = 0;
  double worst_decrease = 0;  // max over iterations of ll[k] - ll[k+1]
  double worst_row_error = 0;  // max |sum_p t(p|l) - 1|
  bool ok() const { return lexicons > 0 && worst_decrease <= 1e-12 && worst_row_error <= 1e-9; }
};

EmReport CheckEmMonotonicity(int num_lexicons, int iterations, std::uint64_t seed);

}  // namespace pmu

#endif  // PMU_TOKENIZERS_TOKENIZER_CHECK_H_
