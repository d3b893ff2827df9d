// pmu/tokenizers/lexicon.h

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

#ifndef PMU_TOKENIZERS_LEXICON_H_
#define PMU_TOKENIZERS_LEXICON_H_

#include <istream>
#include <map>
#include <string>
#include <vector>

namespace pmu {

// Pronunciation lexicon keyed by uppercase word; only the first listed
// pronunciation of a word is kept.
struct Lexicon {
  std::map<std::string, std::vector<std::string>> entries;

  bool empty() const { return entries.empty(); }
  const std::vector<std::string> *Find(const std::string &word) const;
  // Adds an entry unless the word is already present. Returns false when
  // the entry was ignored.
  bool Add(const std::string &word, std::vector<std::string> phonemes);
};

// CMU-dictionary format: "WORD  PH1 PH2 ...", ";;;" comment lines, variant
// entries "WORD(2)" ignored in favour of the first pronunciation.
Lexicon ParseLexicon(std::istream &is);
Lexicon LoadLexicon(const std::string &path);
void SaveLexicon(const Lexicon &lex, std::ostream &os);

}  // namespace pmu

#endif  // PMU_TOKENIZERS_LEXICON_H_
