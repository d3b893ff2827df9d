// src/tokenizers/tokenizer.cc

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

#include "pmu/tokenizers/tokenizer.h"

#include <fstream>
#include <sstream>

#include "pmu/core/error.h"
#include "pmu/tokenizers/bpe.h"
#include "pmu/tokenizers/pasm.h"
#include "pmu/tokenizers/text.h"

namespace pmu {

LabelSequence Tokenizer::Encode(const std::string &text) const {
  LabelSequence out;
  const Vocabulary &v = vocab();
  for (const std::string &word : SplitWords(NormalizeText(text)))
    for (const std::string &unit : WordUnits(word)) {
      const int id = v.IdOf(unit);
      if (id == v.unk_id()) ++out.unk_count;
      out.ids.push_back(id);
    }
  return out;
}

void Tokenizer::SaveToFile(const std::string &path) const {
  std::ofstream os(path);
  if (!os) throw InputError("cannot write '" + path + "'");
  Save(os);
  if (!os) throw InputError("write failed for '" + path + "'");
}

std::unique_ptr<Tokenizer> LoadTokenizer(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open tokenizer model '" + path + "'");
  std::string header;
  std::getline(is, header);
  is.clear();
  is.seekg(0);
  if (header == "pmu-bpe v1") return std::make_unique<BpeModel>(BpeModel::Load(is));
  if (header == "pmu-pasm v1") return std::make_unique<PasmModel>(PasmModel::Load(is));
  throw FormatError("tokenizer model '" + path + "': unsupported header '" + header + "'", 1);
}

}  // namespace pmu
