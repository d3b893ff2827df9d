// src/tokenizers/pasm.cc

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

#include "pmu/tokenizers/pasm.h"

#include <algorithm>
#include <ostream>
#include <set>
#include <sstream>

#include "pmu/core/error.h"
#include "pmu/tokenizers/text.h"

namespace pmu {

namespace {

constexpr int kNumSpecials = 3;  // blank, unk, marker

std::vector<std::string> InventoryUnits(const std::map<std::string, long long> &inv,
                                        const std::string &marker) {
  std::vector<std::string> units;
  for (const auto &kv : inv) units.push_back(kv.first);
  units.push_back(marker);
  return units;
}

}  // namespace

PasmModel::PasmModel(std::map<std::string, long long> inventory, std::string marker)
    : inventory_(std::move(inventory)), marker_(std::move(marker)) {
  for (const auto &kv : inventory_) {
    PMU_CHECK(!kv.first.empty(), "pasm: empty inventory unit");
    max_len_ = std::max(max_len_, kv.first.size());
  }
  vocab_ = BuildVocab(InventoryUnits(inventory_, marker_));
}

std::vector<std::string> PasmModel::SegmentWord(const std::string &word) const {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < word.size()) {
    std::size_t len = std::min(max_len_, word.size() - pos);
    for (; len > 0; --len)
      if (inventory_.count(word.substr(pos, len))) break;
    if (len == 0) {
      out.push_back(kUnkSymbol);
      ++pos;
    } else {
      out.push_back(word.substr(pos, len));
      pos += len;
    }
  }
  return out;
}

std::vector<std::string> PasmModel::WordUnits(const std::string &word) const {
  std::vector<std::string> out = SegmentWord(word);
  out.push_back(marker_);
  return out;
}

void PasmModel::Save(std::ostream &os) const {
  os << "pmu-pasm v1\n";
  os << "marker " << marker_ << "\n";
  for (const auto &[unit, count] : inventory_) os << "unit " << unit << " " << count << "\n";
}

PasmModel PasmModel::Load(std::istream &is) {
  std::string line;
  long long lineno = 1;
  if (!std::getline(is, line) || line != "pmu-pasm v1")
    throw FormatError("pasm model: expected header 'pmu-pasm v1', got '" + line + "'", lineno);
  std::string marker = kWordEndMarker;
  std::map<std::string, long long> inventory;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key, unit;
    long long count = 0;
    ls >> key;
    if (key == "marker" && (ls >> unit)) {
      marker = unit;
    } else if (key == "unit" && (ls >> unit >> count) && count >= 0) {
      inventory[unit] = count;
    } else {
      throw FormatError("pasm model: bad line '" + line + "'", lineno);
    }
  }
  return PasmModel(std::move(inventory), marker);
}

std::vector<std::string> ConsistentSpans(const AlignmentTable &table, const std::string &word,
                                         const std::vector<std::string> &phonemes) {
  const std::vector<std::string> letters = LetterTokens(word);
  if (letters.empty() || phonemes.empty()) return {};
  const std::vector<int> link = ViterbiAlign(table, letters, phonemes);
  std::vector<bool> bearing(letters.size(), false);
  for (int i : link) bearing[i] = true;
  std::vector<std::string> spans;
  std::string current;
  bool seen_bearing = false;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (bearing[i] && seen_bearing) {
      spans.push_back(current);
      current.clear();
    }
    seen_bearing = seen_bearing || bearing[i];
    current += letters[i];
  }
  spans.push_back(current);
  return spans;
}

PasmResult ExtractPasm(const AlignmentTable &table, const Lexicon &lexicon,
                       const std::vector<std::string> &corpus, int min_count, int target_size) {
  std::map<std::string, std::vector<std::string>> spans_of;  // lexicon word -> spans
  std::set<std::string> chars;
  for (const auto &[key, phones] : lexicon.entries) {
    const std::string word = NormalizeText(key);
    for (const std::string &l : LetterTokens(word)) chars.insert(l);
    spans_of[word] = ConsistentSpans(table, word, phones);
  }
  std::map<std::string, long long> counts;
  for (const std::string &line : corpus)
    for (const std::string &w : SplitWords(NormalizeText(line))) {
      for (char c : w) chars.insert(std::string(1, c));
      auto it = spans_of.find(w);
      if (it == spans_of.end()) continue;
      for (const std::string &s : it->second) ++counts[s];
    }

  std::map<std::string, long long> inventory;
  for (const std::string &c : chars) {
    auto it = counts.find(c);
    inventory[c] = it == counts.end() ? 0 : it->second;
  }

  PasmResult result{PasmModel(inventory), PasmStatus::kOk, ""};
  const int seed_size = static_cast<int>(chars.size()) + kNumSpecials;
  if (target_size > 0 && seed_size > target_size) {
    result.status = PasmStatus::kCharFallback;
    result.warning = "pasm: target size " + std::to_string(target_size) +
                     " is below the character seed set (" + std::to_string(seed_size) +
                     "); using a character vocabulary";
    return result;
  }

  std::vector<std::pair<std::string, long long>> ranked;
  for (const auto &[unit, count] : counts)
    if (unit.size() > 1 && count >= min_count) ranked.emplace_back(unit, count);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto &a, const auto &b) { return a.second > b.second; });
  std::size_t keep = ranked.size();
  if (target_size > 0) keep = std::min(keep, static_cast<std::size_t>(target_size - seed_size));
  for (std::size_t i = 0; i < keep; ++i) inventory[ranked[i].first] = ranked[i].second;
  result.model = PasmModel(std::move(inventory));
  return result;
}

}  // namespace pmu
