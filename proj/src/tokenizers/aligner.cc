// src/tokenizers/aligner.cc

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

#include "pmu/tokenizers/aligner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "pmu/core/error.h"
#include "pmu/tokenizers/text.h"

namespace pmu {

namespace {

struct Pair {
  std::vector<int> letters;
  std::vector<int> phonemes;
};

// Normalized diagonal prior over letter positions for phoneme j.
std::vector<double> Prior(int num_letters, int j, int num_phonemes, double tension) {
  std::vector<double> p(num_letters);
  double z = 0;
  for (int i = 0; i < num_letters; ++i) {
    const double d = (i + 0.5) / num_letters - (j + 0.5) / num_phonemes;
    z += p[i] = std::exp(-tension * std::abs(d));
  }
  for (double &v : p) v /= z;
  return p;
}

int IndexIn(const std::vector<std::string> &sorted, const std::string &s) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), s);
  return (it != sorted.end() && *it == s) ? static_cast<int>(it - sorted.begin()) : -1;
}

std::vector<Pair> IndexLexicon(const AlignmentTable &t, const Lexicon &lexicon) {
  std::vector<Pair> pairs;
  for (const auto &[word, phones] : lexicon.entries) {
    Pair p;
    for (const std::string &l : LetterTokens(word)) p.letters.push_back(t.LetterIndex(l));
    for (const std::string &ph : phones) p.phonemes.push_back(t.PhonemeIndex(ph));
    if (!p.letters.empty()) pairs.push_back(std::move(p));
  }
  return pairs;
}

// One E-step; fills `counts` (if non-null) and returns the log-likelihood.
double EStep(const AlignmentTable &t, const std::vector<Pair> &pairs,
             std::vector<std::vector<double>> *counts) {
  double ll = 0;
  std::vector<double> post;
  for (const Pair &p : pairs) {
    const int num_letters = static_cast<int>(p.letters.size());
    const int num_phones = static_cast<int>(p.phonemes.size());
    for (int j = 0; j < num_phones; ++j) {
      const std::vector<double> prior = Prior(num_letters, j, num_phones, t.tension);
      post.assign(num_letters, 0);
      double z = 0;
      for (int i = 0; i < num_letters; ++i)
        z += post[i] = prior[i] * t.prob[p.letters[i]][p.phonemes[j]];
      ll += std::log(z);
      if (counts)
        for (int i = 0; i < num_letters; ++i) (*counts)[p.letters[i]][p.phonemes[j]] += post[i] / z;
    }
  }
  return ll;
}

}  // namespace

std::vector<std::string> LetterTokens(const std::string &word) {
  std::vector<std::string> out;
  for (char c : NormalizeText(word))
    if (c != ' ') out.emplace_back(1, c);
  return out;
}

int AlignmentTable::LetterIndex(const std::string &letter) const { return IndexIn(letters, letter); }
int AlignmentTable::PhonemeIndex(const std::string &ph) const { return IndexIn(phonemes, ph); }

double AlignmentTable::TProb(const std::string &letter, const std::string &phoneme) const {
  const int l = LetterIndex(letter), p = PhonemeIndex(phoneme);
  return (l < 0 || p < 0) ? 0.0 : prob[l][p];
}

AlignmentTable AlignLexicon(const Lexicon &lexicon, int iterations, double tension) {
  PMU_INPUT_CHECK(!lexicon.empty(), "align_lexicon: empty lexicon");
  PMU_INPUT_CHECK(iterations >= 1, "align_lexicon: iterations must be >= 1, got ", iterations);
  PMU_INPUT_CHECK(tension >= 0, "align_lexicon: negative tension");

  AlignmentTable t;
  t.tension = tension;
  std::set<std::string> letters, phones;
  for (const auto &[word, ph] : lexicon.entries) {
    for (const std::string &l : LetterTokens(word)) letters.insert(l);
    phones.insert(ph.begin(), ph.end());
  }
  t.letters.assign(letters.begin(), letters.end());
  t.phonemes.assign(phones.begin(), phones.end());
  const std::size_t np = t.phonemes.size();
  t.prob.assign(t.letters.size(), std::vector<double>(np, 1.0 / static_cast<double>(np)));

  const std::vector<Pair> pairs = IndexLexicon(t, lexicon);
  for (int it = 0; it < iterations; ++it) {
    std::vector<std::vector<double>> counts(t.letters.size(), std::vector<double>(np, 0));
    t.log_likelihood.push_back(EStep(t, pairs, &counts));
    for (std::size_t l = 0; l < t.letters.size(); ++l) {
      double z = 0;
      for (double c : counts[l]) z += c;
      // A letter that never generated anything keeps its previous row.
      if (z <= 0) continue;
      for (std::size_t p = 0; p < np; ++p) t.prob[l][p] = counts[l][p] / z;
    }
  }
  return t;
}

double AlignmentLogLikelihood(const AlignmentTable &table, const Lexicon &lexicon) {
  return EStep(table, IndexLexicon(table, lexicon), nullptr);
}

std::vector<int> ViterbiAlign(const AlignmentTable &table, const std::vector<std::string> &letters,
                              const std::vector<std::string> &phonemes) {
  const int num_letters = static_cast<int>(letters.size());
  const int num_phones = static_cast<int>(phonemes.size());
  if (num_phones == 0) return {};
  PMU_CHECK(num_letters > 0, "viterbi_align: no letters for ", num_phones, " phonemes");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  // score[j][i]: best log-score with phoneme j on letter i.
  std::vector<std::vector<double>> score(num_phones, std::vector<double>(num_letters, kNegInf));
  std::vector<std::vector<int>> back(num_phones, std::vector<int>(num_letters, -1));
  for (int j = 0; j < num_phones; ++j) {
    const std::vector<double> prior = Prior(num_letters, j, num_phones, table.tension);
    for (int i = 0; i < num_letters; ++i) {
      const double t = table.TProb(letters[i], phonemes[j]);
      // Unseen pairs get a tiny floor so that every word stays alignable.
      const double local = std::log(std::max(t, 1e-12) * prior[i]);
      if (j == 0) {
        score[j][i] = local;
        continue;
      }
      int best = -1;
      for (int k = 0; k <= i; ++k)
        if (best < 0 || score[j - 1][k] > score[j - 1][best]) best = k;
      score[j][i] = score[j - 1][best] + local;
      back[j][i] = best;
    }
  }
  int end = 0;
  for (int i = 1; i < num_letters; ++i)
    if (score[num_phones - 1][i] > score[num_phones - 1][end]) end = i;
  std::vector<int> out(num_phones);
  for (int j = num_phones - 1; j >= 0; --j) {
    out[j] = end;
    end = back[j][end];
  }
  return out;
}

}  // namespace pmu
