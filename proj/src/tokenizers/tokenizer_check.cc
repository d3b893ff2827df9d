// src/tokenizers/tokenizer_check.cc

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

#include "pmu/tokenizers/tokenizer_check.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "pmu/tokenizers/aligner.h"
#include "pmu/tokenizers/bpe.h"
#include "pmu/tokenizers/pasm.h"
#include "pmu/tokenizers/text.h"

namespace pmu {

std::vector<std::string> RandomWords(int n, std::uint64_t seed, int alphabet, int max_len) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(1, max_len), letter(0, alphabet - 1);
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) {
    std::string w;
    for (int k = len(rng); k > 0; --k) w += static_cast<char>('a' + letter(rng));
    out.push_back(w);
  }
  return out;
}

Lexicon RandomLexicon(int num_words, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> kind(0, 5);
  Lexicon lex;
  for (const std::string &w : RandomWords(num_words, seed ^ 0x9e3779b97f4a7c15ULL, 6, 5)) {
    std::vector<std::string> phones;
    for (char c : w) {
      const int k = kind(rng);
      if (k == 0) continue;  // silent
      phones.push_back(std::string(1, static_cast<char>(c - 'a' + 'A')));
      if (k == 1) phones.push_back("X");
    }
    if (phones.empty()) phones.push_back("AH");
    lex.Add(w, std::move(phones));
  }
  return lex;
}

BpeSuiteReport CheckBpeSuite(int num_words, int num_merges, std::uint64_t seed) {
  BpeSuiteReport r;
  const std::vector<std::string> words = RandomWords(num_words, seed);
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < words.size(); i += 10)
    lines.push_back(JoinWords({words.begin() + i, words.begin() + std::min(words.size(), i + 10)}));
  const BpeModel a = TrainBpe(lines, num_merges);
  const BpeModel b = TrainBpe(lines, num_merges);
  r.deterministic = a.merges() == b.merges() && a.vocab() == b.vocab();
  for (const std::string &w : words) {
    ++r.words;
    const LabelSequence ids = a.Encode(w);
    std::string concat;
    for (const std::string &u : a.SegmentWord(w)) concat += u;
    const bool ok = ids.unk_count == 0 && a.Decode(ids.ids) == w &&
                    concat == w + a.word_end_marker();
    if (!ok) ++r.round_trip_failures;
  }
  return r;
}

PasmLawReport CheckPasmConcatenation(const Lexicon &lexicon, int iterations, int target_size) {
  PasmLawReport r;
  const AlignmentTable table = AlignLexicon(lexicon, iterations);
  std::vector<std::string> corpus;
  for (const auto &kv : lexicon.entries) corpus.push_back(kv.first);
  const PasmResult pasm = ExtractPasm(table, lexicon, corpus, 1, target_size);
  for (const auto &kv : lexicon.entries) {
    const std::string word = NormalizeText(kv.first);
    ++r.words;
    std::string concat;
    for (const std::string &u : pasm.model.SegmentWord(word)) concat += u;
    if (concat != word) ++r.failures;
  }
  return r;
}

EmReport CheckEmMonotonicity(int num_lexicons, int iterations, std::uint64_t seed) {
  EmReport r;
  for (int k = 0; k < num_lexicons; ++k) {
    const Lexicon lex = RandomLexicon(20, seed + static_cast<std::uint64_t>(k));
    const AlignmentTable t = AlignLexicon(lex, iterations);
    ++r.lexicons;
    for (std::size_t i = 0; i + 1 < t.log_likelihood.size(); ++i)
      r.worst_decrease = std::max(r.worst_decrease, t.log_likelihood[i] - t.log_likelihood[i + 1]);
    for (const auto &row : t.prob) {
      double s = 0;
      for (double p : row) {
        s += p;
        if (p < 0 || p > 1) r.worst_row_error = std::max(r.worst_row_error, 1.0);
      }
      r.worst_row_error = std::max(r.worst_row_error, std::abs(s - 1));
    }
  }
  return r;
}

}  // namespace pmu
