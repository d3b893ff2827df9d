// src/tokenizers/lexicon.cc

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

#include "pmu/tokenizers/lexicon.h"

#include <fstream>
#include <sstream>

#include "pmu/core/error.h"
#include "pmu/tokenizers/text.h"

namespace pmu {

const std::vector<std::string> *Lexicon::Find(const std::string &word) const {
  auto it = entries.find(LexiconKey(word));
  return it == entries.end() ? nullptr : &it->second;
}

bool Lexicon::Add(const std::string &word, std::vector<std::string> phonemes) {
  const std::string key = LexiconKey(word);
  if (key.empty() || phonemes.empty()) return false;
  return entries.emplace(key, std::move(phonemes)).second;
}

Lexicon ParseLexicon(std::istream &is) {
  Lexicon lex;
  std::string line;
  long long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.rfind(";;;", 0) == 0) continue;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    std::vector<std::string> phones;
    for (std::string p; ls >> p;) phones.push_back(p);
    if (phones.empty()) throw FormatError("lexicon: entry '" + word + "' has no phonemes", lineno);
    // "WORD(2)" marks an alternative pronunciation.
    const auto paren = word.find('(');
    if (paren != std::string::npos && paren > 0 && word.back() == ')') {
      word = word.substr(0, paren);
      if (lex.Find(word)) continue;
    }
    lex.Add(word, std::move(phones));
  }
  return lex;
}

Lexicon LoadLexicon(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open lexicon '" + path + "'");
  return ParseLexicon(is);
}

void SaveLexicon(const Lexicon &lex, std::ostream &os) {
  for (const auto &[word, phones] : lex.entries) {
    os << word << " ";
    for (const std::string &p : phones) os << " " << p;
    os << "\n";
  }
}

}  // namespace pmu
