// pmu/tokenizers/aligner.h

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

#ifndef PMU_TOKENIZERS_ALIGNER_H_
#define PMU_TOKENIZERS_ALIGNER_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pmu/tokenizers/lexicon.h"

namespace pmu {

// Letter -> phoneme translation table t(phoneme | letter) learned by EM.
// Each phoneme of an entry is generated by exactly one letter; a letter may
// generate several phonemes or none. The alignment prior is a fixed
// diagonal preference p(i | j) ~ exp(-tension * |(i+.5)/I - (j+.5)/J|);
// tension 0 is IBM Model 1.
struct AlignmentTable {
  std::vector<std::string> letters;   // sorted
  std::vector<std::string> phonemes;  // sorted
  std::vector<std::vector<double>> prob;  // [letter][phoneme], rows sum to 1
  double tension = 4.0;
  // Corpus log-likelihood under the parameters entering each iteration.
  std::vector<double> log_likelihood;

  double TProb(const std::string &letter, const std::string &phoneme) const;
  int LetterIndex(const std::string &letter) const;
  int PhonemeIndex(const std::string &phoneme) const;
};

// Letter tokens of a lexicon word (lowercase characters).
std::vector<std::string> LetterTokens(const std::string &word);

// Runs `iterations` EM steps from a uniform table. Throws InputError on an
// empty lexicon or iterations < 1.
AlignmentTable AlignLexicon(const Lexicon &lexicon, int iterations, double tension = 4.0);

// Log-likelihood of the lexicon under a table.
double AlignmentLogLikelihood(const AlignmentTable &table, const Lexicon &lexicon);

// Best monotone alignment: result[j] is the letter index generating
// phoneme j, non-decreasing in j. Ties go to the leftmost letter.
std::vector<int> ViterbiAlign(const AlignmentTable &table, const std::vector<std::string> &letters,
                              const std::vector<std::string> &phonemes);

}  // namespace pmu

#endif  // PMU_TOKENIZERS_ALIGNER_H_
