// pmu/tokenizers/text.h

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

#ifndef PMU_TOKENIZERS_TEXT_H_
#define PMU_TOKENIZERS_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace pmu {

// Lowercases ASCII letters, keeps digits and apostrophes, drops every other
// character except whitespace, and collapses runs of whitespace to one space.
std::string NormalizeText(std::string_view text);

// Uppercase form used for lexicon lookup.
std::string LexiconKey(std::string_view word);

std::vector<std::string> SplitWords(std::string_view text);

std::string JoinWords(const std::vector<std::string> &words);

}  // namespace pmu

#endif  // PMU_TOKENIZERS_TEXT_H_
