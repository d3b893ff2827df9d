// pmu/decode/dataset.h

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

#ifndef PMU_DECODE_DATASET_H_
#define PMU_DECODE_DATASET_H_

#include <cstdint>
#include <string>
#include <vector>

#include "pmu/core/config_file.h"
#include "pmu/core/tensor.h"
#include "pmu/tokenizers/lexicon.h"

namespace pmu {

struct Utterance {
  std::string id;
  Tensor features;  // T x D
  std::string transcript;
};

using Dataset = std::vector<Utterance>;

// Manifest: one utterance per line, "id<TAB>feature-path<TAB>transcript".
// Relative feature paths are resolved against the manifest's directory.
// Duplicate ids and transcripts that normalize to nothing are rejected.
Dataset LoadManifest(const std::string &path);
// Writes <dir>/feats/<id>.pmuf and <dir>/<manifest_name>.
void SaveDataset(const Dataset &data, const std::string &dir, const std::string &manifest_name);

// Synthetic task: each word type owns a fixed random stencil of
// stencil_rows x feature_dim values; a word occurrence stretches its stencil
// over a random number of frames and adds N(0, noise^2) noise.
struct ToySpec {
  int word_types = 4;  // <= 12
  int min_words = 1;
  int max_words = 3;
  int feature_dim = 16;
  int min_frames = 10;  // per word
  int max_frames = 14;
  int stencil_rows = 3;
  double noise = 0.1;
  int train_utterances = 400;
  int test_utterances = 50;

  // Throws InputError on invalid ranges.
  void Validate() const;
};

// [toy] section; unknown keys are left for the caller to report.
void ReadToySpec(const ConfigFile &file, ToySpec *spec);
void WriteToySpec(std::ostream &os, const ToySpec &spec);

struct ToyDataset {
  std::vector<std::string> words;  // word types in use
  Lexicon lexicon;                 // letter-named pseudo-phonemes
  Dataset train;
  Dataset test;
};

// Deterministic in (spec, seed). Feature values are rounded to float32 so
// that feature files reproduce them exactly.
ToyDataset SynthToyDataset(const ToySpec &spec, std::uint64_t seed);

// Word pool and micro-lexicon the synthetic task draws from.
const std::vector<std::pair<std::string, std::vector<std::string>>> &ToyWordPool();

}  // namespace pmu

#endif  // PMU_DECODE_DATASET_H_
