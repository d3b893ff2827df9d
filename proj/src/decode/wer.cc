// src/decode/wer.cc

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

#include "pmu/decode/wer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "pmu/tokenizers/text.h"

namespace pmu {

namespace {

void Finish(WerReport &r) {
  r.defined = r.ref_words > 0;
  r.wer = r.defined ? static_cast<double>(r.errors()) / static_cast<double>(r.ref_words)
                    : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

WerReport &WerReport::operator+=(const WerReport &o) {
  substitutions += o.substitutions;
  insertions += o.insertions;
  deletions += o.deletions;
  ref_words += o.ref_words;
  Finish(*this);
  return *this;
}

std::string WerReport::ToString() const {
  std::ostringstream os;
  os << "wer=";
  if (defined)
    os << wer;
  else
    os << "undefined";
  os << " sub=" << substitutions << " ins=" << insertions << " del=" << deletions
     << " ref_words=" << ref_words;
  return os.str();
}

WerReport ComputeWer(const std::string &ref, const std::string &hyp) {
  const std::vector<std::string> r = SplitWords(NormalizeText(ref));
  const std::vector<std::string> h = SplitWords(NormalizeText(hyp));
  const std::size_t n = r.size(), m = h.size();
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      d[i][j] = std::min({d[i - 1][j - 1] + (r[i - 1] == h[j - 1] ? 0 : 1), d[i - 1][j] + 1,
                          d[i][j - 1] + 1});
  WerReport rep;
  rep.ref_words = static_cast<long long>(n);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + (r[i - 1] == h[j - 1] ? 0 : 1)) {
      if (r[i - 1] != h[j - 1]) ++rep.substitutions;
      --i;
      --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++rep.deletions;
      --i;
    } else {
      ++rep.insertions;
      --j;
    }
  }
  Finish(rep);
  return rep;
}

}  // namespace pmu
