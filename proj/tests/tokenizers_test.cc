// tests/tokenizers_test.cc

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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pmu/core/error.h"
#include "pmu/tokenizers/aligner.h"
#include "pmu/tokenizers/bpe.h"
#include "pmu/tokenizers/lexicon.h"
#include "pmu/tokenizers/pasm.h"
#include "pmu/tokenizers/text.h"
#include "pmu/tokenizers/tokenizer_check.h"

using namespace pmu;

namespace {

std::vector<std::string> Ids2Units(const Vocabulary &v, const std::vector<int> &ids) {
  std::vector<std::string> out;
  for (int id : ids) out.push_back(v.unit(id));
  return out;
}

Lexicon ParseString(const std::string &s) {
  std::istringstream is(s);
  return ParseLexicon(is);
}

}  // namespace

TEST_CASE("text normalization") {
  CHECK(NormalizeText("  Hello,  World!  it's ") == "hello world it's");
  CHECK(LexiconKey("it's") == "IT'S");
  CHECK(SplitWords("a  b c").size() == 3);
}

TEST_CASE("vocab: blank and unk are reserved") {
  Vocabulary v = BuildVocab({"b", "a", "a"});
  REQUIRE(v.size() == 4);
  CHECK(v.blank_id() == 0);
  CHECK(v.unk_id() == 1);
  CHECK(v.IdOf("a") == 2);
  CHECK(v.IdOf("b") == 3);
  CHECK(v.IdOf("zz") == 1);
  CHECK(BuildVocab({"a", "b"}) == v);
  const int ids[] = {2, 0, 3, 0};
  CHECK(DecodeUnits(v, ids) == "ab");
}

TEST_CASE("bpe: first merge follows the tie-break") {
  BpeModel m = TrainBpe({"low low lower"}, 1);
  REQUIRE(m.merges().size() == 1);
  CHECK(m.merges()[0] == BpeModel::Merge{"l", "o"});
  CHECK(m.SegmentWord("low") == std::vector<std::string>{"lo", "w", "_"});
  CHECK(Ids2Units(m.vocab(), m.Encode("low").ids) == std::vector<std::string>{"lo", "w", "_"});
  // e l o r w _ plus one merge plus blank and unk
  CHECK(m.vocab().size() == 6 + 1 + 2);
}

TEST_CASE("bpe: zero merges segments to characters") {
  BpeModel m = TrainBpe({"ab"}, 0);
  CHECK(Ids2Units(m.vocab(), m.Encode("ab").ids) == std::vector<std::string>{"a", "b", "_"});
  CHECK(m.Encode("abc").unk_count == 1);
  CHECK_THROWS_AS(TrainBpe({}, 3), InputError);
  CHECK_THROWS_AS(TrainBpe({" , "}, 3), InputError);
}

TEST_CASE("bpe: determinism and round trip on a fuzz corpus") {
  BpeSuiteReport r = CheckBpeSuite(1000, 60, 7);
  CHECK(r.deterministic);
  CHECK(r.words == 1000);
  CHECK(r.round_trip_failures == 0);
}

TEST_CASE("bpe: save and load") {
  BpeModel m = TrainBpe({"the cat sat on the mat", "the hat"}, 5);
  std::stringstream ss;
  m.Save(ss);
  BpeModel back = BpeModel::Load(ss);
  CHECK(back.merges() == m.merges());
  CHECK(back.vocab() == m.vocab());
  std::istringstream bad("pmu-bpe v2\n");
  CHECK_THROWS_AS(BpeModel::Load(bad), FormatError);
  std::istringstream garbage("pmu-bpe v1\nmerge a\n");
  try {
    BpeModel::Load(garbage);
    FAIL("expected FormatError");
  } catch (const FormatError &e) {
    CHECK(e.offset() == 2);
  }
}

TEST_CASE("lexicon parser") {
  Lexicon lex = ParseString(";;; comment\nREAD  R IY1 D\nREAD(2)  R EH1 D\nA  AH0\n");
  REQUIRE(lex.entries.size() == 2);
  CHECK(*lex.Find("read") == std::vector<std::string>{"R", "IY1", "D"});
  CHECK_THROWS_AS(ParseString("WORD\n"), FormatError);
}

TEST_CASE("aligner: single link") {
  AlignmentTable t = AlignLexicon(ParseString("A AH\n"), 1);
  CHECK(t.TProb("a", "AH") == 1.0);
  CHECK_THROWS_AS(AlignLexicon(Lexicon{}, 1), InputError);
  CHECK_THROWS_AS(AlignLexicon(ParseString("A AH\n"), 0), InputError);
}

TEST_CASE("aligner: two-entry lexicon converges") {
  Lexicon lex = ParseString("A AH\nAB AH B\n");
  AlignmentTable t = AlignLexicon(lex, 5);
  // independent numpy run of the same EM
  CHECK(t.TProb("a", "AH") == doctest::Approx(0.9999985604722137).epsilon(1e-12));
  CHECK(t.TProb("b", "B") == doctest::Approx(0.9999585039303768).epsilon(1e-12));
  const double ll[] = {-2.079441541679836, -0.47756159330445913, -0.27696436846172345,
                       -0.25640280666789017, -0.25416086011514283};
  REQUIRE(t.log_likelihood.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(t.log_likelihood[i] == doctest::Approx(ll[i]).epsilon(1e-12));
  CHECK(t.TProb("a", "AH") >= 0.9);
  CHECK(t.TProb("b", "B") >= 0.9);
}

TEST_CASE("aligner: monotone likelihood and normalized rows") {
  EmReport r = CheckEmMonotonicity(10, 8, 11);
  CHECK(r.lexicons == 10);
  CHECK(r.worst_decrease <= 1e-12);
  CHECK(r.worst_row_error <= 1e-9);
}

TEST_CASE("viterbi alignment is monotone") {
  Lexicon lex = ParseString("SHE SH IY\nSEE S IY\nHE HH IY\n");
  AlignmentTable t = AlignLexicon(lex, 10);
  std::vector<int> link = ViterbiAlign(t, LetterTokens("she"), {"SH", "IY"});
  REQUIRE(link.size() == 2);
  CHECK(link[0] <= link[1]);
  CHECK(link[1] == 2);
}

TEST_CASE("pasm: single letter") {
  Lexicon lex = ParseString("A AH\n");
  PasmResult r = ExtractPasm(AlignLexicon(lex, 1), lex, {"a"}, 1, 0);
  CHECK(r.status == PasmStatus::kOk);
  CHECK(r.model.inventory().count("a") == 1);
  CHECK(r.model.SegmentWord("a") == std::vector<std::string>{"a"});
}

TEST_CASE("pasm: digraph becomes a unit") {
  Lexicon lex = ParseString("SH SH\n");
  PasmResult r = ExtractPasm(AlignLexicon(lex, 5), lex, {"sh sh sh"}, 1, 0);
  CHECK(r.model.inventory().count("sh") == 1);
  CHECK(r.model.inventory().at("sh") == 3);
  CHECK(r.model.SegmentWord("sh") == std::vector<std::string>{"sh"});
  CHECK(Ids2Units(r.model.vocab(), r.model.Encode("sh").ids) ==
        std::vector<std::string>{"sh", "_"});
  // min_count filters it
  PasmResult rare = ExtractPasm(AlignLexicon(lex, 5), lex, {"sh sh sh"}, 4, 0);
  CHECK(rare.model.inventory().count("sh") == 0);
}

TEST_CASE("pasm: greedy longest match") {
  PasmModel ab({{"a", 1}, {"b", 1}, {"ab", 1}});
  CHECK(ab.SegmentWord("ab") == std::vector<std::string>{"ab"});
  PasmModel chars({{"a", 1}, {"b", 1}});
  CHECK(chars.SegmentWord("ab") == std::vector<std::string>{"a", "b"});
  PasmModel abc({{"a", 1}, {"ab", 1}, {"b", 1}, {"c", 1}});
  CHECK(abc.SegmentWord("abc") == std::vector<std::string>{"ab", "c"});
  CHECK(abc.SegmentWord("axb") == std::vector<std::string>{"a", "<unk>", "b"});
  CHECK(abc.Encode("axb").unk_count == 1);
}

TEST_CASE("pasm: target size truncates and falls back") {
  Lexicon lex = ParseString("SHE SH IY\nSHEEP SH IY P\nTHE TH AH\nTHESE TH IY Z\n");
  AlignmentTable t = AlignLexicon(lex, 10);
  PasmResult full = ExtractPasm(t, lex, {"she sheep the these she"}, 1, 0);
  PasmResult tight = ExtractPasm(t, lex, {"she sheep the these she"}, 1, 5 + 3 + 1);
  CHECK(tight.status == PasmStatus::kOk);
  CHECK(tight.model.vocab().size() <= 9);
  CHECK(full.model.vocab().size() >= tight.model.vocab().size());
  PasmResult tiny = ExtractPasm(t, lex, {"she"}, 1, 4);
  CHECK(tiny.status == PasmStatus::kCharFallback);
  CHECK_FALSE(tiny.warning.empty());
  for (const auto &kv : tiny.model.inventory()) CHECK(kv.first.size() == 1);
}

TEST_CASE("pasm: concatenation law and save/load") {
  PasmLawReport law = CheckPasmConcatenation(RandomLexicon(200, 3), 8, 0);
  CHECK(law.words > 100);
  CHECK(law.failures == 0);
  Lexicon lex = ParseString("SHE SH IY\nCHICK CH IH K\n");
  PasmResult r = ExtractPasm(AlignLexicon(lex, 5), lex, {"she chick"}, 1, 0);
  std::stringstream ss;
  r.model.Save(ss);
  PasmModel back = PasmModel::Load(ss);
  CHECK(back.inventory() == r.model.inventory());
  CHECK(back.vocab() == r.model.vocab());
  std::istringstream bad("pmu-bpe v1\n");
  CHECK_THROWS_AS(PasmModel::Load(bad), FormatError);
}
