// src/decode/dataset.cc

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

#include "pmu/decode/dataset.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "pmu/core/error.h"
#include "pmu/decode/features.h"
#include "pmu/tokenizers/text.h"

namespace pmu {

namespace fs = std::filesystem;

Dataset LoadManifest(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open manifest '" + path + "'");
  const fs::path base = fs::path(path).parent_path();
  Dataset data;
  std::set<std::string> ids;
  std::string line;
  long long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto a = line.find('\t');
    const auto b = a == std::string::npos ? a : line.find('\t', a + 1);
    if (b == std::string::npos)
      throw FormatError("manifest '" + path + "': expected id<TAB>features<TAB>transcript", lineno);
    Utterance u;
    u.id = line.substr(0, a);
    fs::path feats = line.substr(a + 1, b - a - 1);
    u.transcript = line.substr(b + 1);
    if (u.id.empty()) throw FormatError("manifest '" + path + "': empty id", lineno);
    if (NormalizeText(u.transcript).empty())
      throw InputError("manifest '" + path + "' line " + std::to_string(lineno) + ": utterance " +
                       u.id + " has an empty transcript");
    if (!ids.insert(u.id).second)
      throw InputError("manifest '" + path + "' line " + std::to_string(lineno) +
                       ": duplicate id " + u.id);
    if (feats.is_relative()) feats = base / feats;
    u.features = LoadFeatures(feats.string());
    data.push_back(std::move(u));
  }
  return data;
}

void SaveDataset(const Dataset &data, const std::string &dir, const std::string &manifest_name) {
  fs::create_directories(fs::path(dir) / "feats");
  std::ofstream os(fs::path(dir) / manifest_name);
  if (!os) throw InputError("cannot write manifest in '" + dir + "'");
  for (const Utterance &u : data) {
    const std::string rel = "feats/" + u.id + ".pmuf";
    SaveFeatures((fs::path(dir) / rel).string(), u.features);
    os << u.id << "\t" << rel << "\t" << u.transcript << "\n";
  }
}

void ToySpec::Validate() const {
  const int pool = static_cast<int>(ToyWordPool().size());
  PMU_INPUT_CHECK(word_types >= 1 && word_types <= pool, "toy spec: word_types must be in [1, ",
                  pool, "], got ", word_types);
  PMU_INPUT_CHECK(min_words >= 1 && max_words >= min_words,
                  "toy spec: need 1 <= min_words <= max_words");
  PMU_INPUT_CHECK(min_frames >= 1 && max_frames >= min_frames,
                  "toy spec: need 1 <= min_frames <= max_frames");
  PMU_INPUT_CHECK(feature_dim >= 1, "toy spec: feature_dim must be positive");
  PMU_INPUT_CHECK(stencil_rows >= 1 && stencil_rows <= min_frames,
                  "toy spec: stencil_rows must be in [1, min_frames]");
  PMU_INPUT_CHECK(noise >= 0, "toy spec: noise must be >= 0");
  PMU_INPUT_CHECK(train_utterances >= 1 && test_utterances >= 0,
                  "toy spec: need train_utterances >= 1 and test_utterances >= 0");
}

void ReadToySpec(const ConfigFile &f, ToySpec *s) {
  f.Read("toy", "word_types", &s->word_types);
  f.Read("toy", "min_words", &s->min_words);
  f.Read("toy", "max_words", &s->max_words);
  f.Read("toy", "feature_dim", &s->feature_dim);
  f.Read("toy", "min_frames", &s->min_frames);
  f.Read("toy", "max_frames", &s->max_frames);
  f.Read("toy", "stencil_rows", &s->stencil_rows);
  f.Read("toy", "noise", &s->noise);
  f.Read("toy", "train_utterances", &s->train_utterances);
  f.Read("toy", "test_utterances", &s->test_utterances);
}

void WriteToySpec(std::ostream &os, const ToySpec &s) {
  os << "[toy]\n"
     << "word_types = " << s.word_types << "\n"
     << "min_words = " << s.min_words << "\n"
     << "max_words = " << s.max_words << "\n"
     << "feature_dim = " << s.feature_dim << "\n"
     << "min_frames = " << s.min_frames << "\n"
     << "max_frames = " << s.max_frames << "\n"
     << "stencil_rows = " << s.stencil_rows << "\n"
     << "noise = " << s.noise << "\n"
     << "train_utterances = " << s.train_utterances << "\n"
     << "test_utterances = " << s.test_utterances << "\n";
}

const std::vector<std::pair<std::string, std::vector<std::string>>> &ToyWordPool() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> pool{
      {"she", {"SH", "IY"}},         {"chick", {"CH", "IH", "K"}}, {"moon", {"M", "UW", "N"}},
      {"the", {"DH", "AH"}},         {"sheep", {"SH", "IY", "P"}}, {"fish", {"F", "IH", "SH"}},
      {"tree", {"T", "R", "IY"}},    {"sees", {"S", "IY", "Z"}},   {"cat", {"K", "AE", "T"}},
      {"dog", {"D", "AO", "G"}},     {"red", {"R", "EH", "D"}},    {"blue", {"B", "L", "UW"}},
  };
  return pool;
}

ToyDataset SynthToyDataset(const ToySpec &spec, std::uint64_t seed) {
  spec.Validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0, 1);
  ToyDataset out;
  std::vector<Tensor> stencils;
  for (int w = 0; w < spec.word_types; ++w) {
    const auto &[word, phones] = ToyWordPool()[w];
    out.words.push_back(word);
    out.lexicon.Add(word, phones);
    Tensor s({spec.stencil_rows, spec.feature_dim}, 0);
    for (Real &v : s.vec()) v = static_cast<Real>(gauss(rng));
    stencils.push_back(std::move(s));
  }
  std::uniform_int_distribution<int> num_words(spec.min_words, spec.max_words);
  std::uniform_int_distribution<int> frames(spec.min_frames, spec.max_frames);
  std::uniform_int_distribution<int> pick(0, spec.word_types - 1);
  auto make = [&](const std::string &prefix, int n, Dataset *dst) {
    for (int i = 0; i < n; ++i) {
      std::vector<int> words(num_words(rng));
      std::vector<int> lengths(words.size());
      int total = 0;
      for (std::size_t k = 0; k < words.size(); ++k) {
        words[k] = pick(rng);
        total += lengths[k] = frames(rng);
      }
      Tensor x({total, spec.feature_dim}, 0);
      std::vector<std::string> text;
      int row = 0;
      for (std::size_t k = 0; k < words.size(); ++k) {
        const Tensor &st = stencils[words[k]];
        for (int f = 0; f < lengths[k]; ++f, ++row)
          for (int c = 0; c < spec.feature_dim; ++c) {
            const double v = st.at(f * spec.stencil_rows / lengths[k], c) + spec.noise * gauss(rng);
            x.at(row, c) = static_cast<Real>(static_cast<float>(v));
          }
        text.push_back(out.words[words[k]]);
      }
      char id[32];
      std::snprintf(id, sizeof(id), "%s-%05d", prefix.c_str(), i);
      dst->push_back({id, std::move(x), JoinWords(text)});
    }
  };
  make("train", spec.train_utterances, &out.train);
  make("test", spec.test_utterances, &out.test);
  return out;
}

}  // namespace pmu
