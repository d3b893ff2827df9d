// src/tokenizers/bpe.cc

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

#include "pmu/tokenizers/bpe.h"

#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "pmu/core/error.h"
#include "pmu/tokenizers/text.h"

namespace pmu {

namespace {

std::vector<std::string> Characters(const std::string &word) {
  std::vector<std::string> out;
  for (char c : word) out.emplace_back(1, c);
  return out;
}

// Replaces every non-overlapping occurrence of (a, b), left to right.
// Returns true when something changed.
bool ApplyMerge(std::vector<std::string> &symbols, const BpeModel::Merge &m) {
  bool changed = false;
  std::size_t w = 0;
  for (std::size_t r = 0; r < symbols.size(); ++r) {
    if (r + 1 < symbols.size() && symbols[r] == m.first && symbols[r + 1] == m.second) {
      symbols[w++] = m.first + m.second;
      ++r;
      changed = true;
    } else {
      if (w != r) symbols[w] = std::move(symbols[r]);
      ++w;
    }
  }
  symbols.resize(w);
  return changed;
}

}  // namespace

BpeModel::BpeModel(std::vector<std::string> seed, std::vector<Merge> merges, std::string marker)
    : seed_(std::move(seed)), merges_(std::move(merges)), marker_(std::move(marker)) {
  std::vector<std::string> units = seed_;
  for (const Merge &m : merges_) units.push_back(m.first + m.second);
  vocab_ = BuildVocab(units);
}

std::vector<std::string> BpeModel::SegmentWord(const std::string &word) const {
  // Unknown characters split the word into independently merged pieces.
  std::vector<std::string> out;
  std::vector<std::string> piece;
  auto flush = [&] {
    for (const Merge &m : merges_) ApplyMerge(piece, m);
    out.insert(out.end(), piece.begin(), piece.end());
    piece.clear();
  };
  for (std::string &c : Characters(word)) {
    if (vocab_.Contains(c)) {
      piece.push_back(std::move(c));
    } else {
      flush();
      out.push_back(kUnkSymbol);
    }
  }
  piece.push_back(marker_);
  flush();
  return out;
}

void BpeModel::Save(std::ostream &os) const {
  os << "pmu-bpe v1\n";
  os << "marker " << marker_ << "\n";
  for (const std::string &s : seed_)
    if (s != marker_) os << "char " << s << "\n";
  for (const Merge &m : merges_) os << "merge " << m.first << " " << m.second << "\n";
}

BpeModel BpeModel::Load(std::istream &is) {
  std::string line;
  long long lineno = 1;
  if (!std::getline(is, line) || line != "pmu-bpe v1")
    throw FormatError("bpe model: expected header 'pmu-bpe v1', got '" + line + "'", lineno);
  std::string marker = kWordEndMarker;
  std::vector<std::string> seed;
  std::vector<Merge> merges;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key, a, b;
    ls >> key;
    if (key == "marker" && (ls >> a)) {
      marker = a;
    } else if (key == "char" && (ls >> a)) {
      seed.push_back(a);
    } else if (key == "merge" && (ls >> a >> b)) {
      merges.emplace_back(a, b);
    } else {
      throw FormatError("bpe model: bad line '" + line + "'", lineno);
    }
  }
  seed.push_back(marker);
  return BpeModel(std::move(seed), std::move(merges), marker);
}

BpeModel TrainBpe(const std::vector<std::string> &lines, int num_merges) {
  PMU_INPUT_CHECK(num_merges >= 0, "train_bpe: negative merge count ", num_merges);
  // Distinct words in first-occurrence order, with frequencies.
  std::vector<std::vector<std::string>> words;
  std::vector<long long> freq;
  std::unordered_map<std::string, std::size_t> index;
  std::set<std::string> chars;
  for (const std::string &line : lines)
    for (const std::string &w : SplitWords(NormalizeText(line))) {
      auto [it, fresh] = index.emplace(w, words.size());
      if (fresh) {
        std::vector<std::string> sym = Characters(w);
        chars.insert(sym.begin(), sym.end());
        sym.push_back(kWordEndMarker);
        words.push_back(std::move(sym));
        freq.push_back(0);
      }
      ++freq[it->second];
    }
  PMU_INPUT_CHECK(!words.empty(), "train_bpe: empty corpus");

  std::vector<std::string> seed(chars.begin(), chars.end());
  seed.push_back(kWordEndMarker);

  struct PairStat {
    long long count = 0;
    std::size_t first_word = 0, first_pos = 0;
  };
  std::vector<BpeModel::Merge> merges;
  for (int iter = 0; iter < num_merges; ++iter) {
    std::map<BpeModel::Merge, PairStat> stats;
    for (std::size_t wi = 0; wi < words.size(); ++wi)
      for (std::size_t p = 0; p + 1 < words[wi].size(); ++p) {
        auto [it, fresh] = stats.try_emplace({words[wi][p], words[wi][p + 1]});
        if (fresh) {
          it->second.first_word = wi;
          it->second.first_pos = p;
        }
        it->second.count += freq[wi];
      }
    if (stats.empty()) break;
    auto best = stats.begin();
    for (auto it = stats.begin(); it != stats.end(); ++it) {
      const PairStat &a = it->second, &b = best->second;
      // std::map iteration is lexicographic, so strict comparisons keep the
      // smaller pair on a full tie.
      if (std::make_tuple(-a.count, a.first_word, a.first_pos) <
          std::make_tuple(-b.count, b.first_word, b.first_pos))
        best = it;
    }
    merges.push_back(best->first);
    for (auto &w : words) ApplyMerge(w, best->first);
  }
  return BpeModel(std::move(seed), std::move(merges));
}

}  // namespace pmu
