// tasr/tests/test_vocab.cpp

// Copyright 2026  The tasr authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tasr/vocab.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "tasr/common.hpp"
#include "tasr/text.hpp"

using tasr::UnitKind;

namespace {

tasr::Lexicon demo_lexicon() {
  tasr::Lexicon lex;
  lex.word_prons["一种"] = {{"YI1", "ZHONG3"}};
  lex.word_prons["信念"] = {{"XIN4", "NIAN4"}};
  lex.syllable_phones["YI1"] = {"Y", "IY1"};
  lex.syllable_phones["ZHONG3"] = {"JH", "UH3", "NG3"};
  lex.syllable_phones["XIN4"] = {"X", "IY4", "N4"};
  lex.syllable_phones["NIAN4"] = {"N", "IY4", "AE4", "N4"};
  return lex;
}

std::vector<std::string> toks(std::initializer_list<const char*> xs) {
  return {xs.begin(), xs.end()};
}

}  // namespace

TEST_CASE("the same sentence segments five ways") {
  const tasr::Lexicon lex = demo_lexicon();
  tasr::MergeTable merges;
  merges.merges = {{"一", "种"}};
  const std::string sentence = "一种 信念";

  CHECK(tasr::segment(sentence, UnitKind::ci_phoneme, &lex) ==
        toks({"Y", "IY1", "JH", "UH3", "NG3", "X", "IY4", "N4", "N", "IY4",
              "AE4", "N4"}));
  CHECK(tasr::segment(sentence, UnitKind::syllable, &lex) ==
        toks({"YI1", "ZHONG3", "XIN4", "NIAN4"}));
  CHECK(tasr::segment(sentence, UnitKind::character) ==
        toks({"一", "种", "信", "念"}));
  CHECK(tasr::segment(sentence, UnitKind::subword, nullptr, &merges) ==
        toks({"一种", "信@@", "念"}));
  CHECK(tasr::segment(sentence, UnitKind::word) == toks({"一种", "信念"}));
}

TEST_CASE("character segmentation keeps Latin runs whole") {
  CHECK(tasr::segment_characters("OK了") == toks({"OK", "了"}));
  CHECK(tasr::segment_characters("信念") == toks({"信", "念"}));
  CHECK(tasr::segment_characters("x86芯片v2") == toks({"x86", "芯", "片", "v2"}));
}

TEST_CASE("build_vocab: 4 extras + sorted distinct units") {
  const tasr::Vocabulary v =
      tasr::build_vocab({"一种 信念"}, UnitKind::character);
  REQUIRE(v.size() == 8);
  CHECK(v.tokens[0] == "<PAD>");
  CHECK(v.tokens[1] == "<UNK>");
  CHECK(v.tokens[2] == "<S>");
  CHECK(v.tokens[3] == "</S>");
  CHECK(std::is_sorted(v.tokens.begin() + 4, v.tokens.end()));

  // Permutation invariance and determinism.
  const tasr::Vocabulary v2 =
      tasr::build_vocab({"信念 一种", "一种"}, UnitKind::character);
  CHECK(v2.tokens == v.tokens);
}

TEST_CASE("encode falls back to <UNK> and never emits other extras") {
  const tasr::Vocabulary v = tasr::build_vocab({"一种 信念"}, UnitKind::word);
  const auto ids = tasr::encode("一种 不明 信念", v);
  REQUIRE(ids.size() == 3);
  CHECK(ids[1] == tasr::kUnkId);
  for (int id : ids) {
    CHECK(id < v.size());
    CHECK(id != tasr::kPadId);
    CHECK(id != tasr::kBosId);
    CHECK(id != tasr::kEosId);
  }
}

TEST_CASE("lexicon kinds: strict encoding throws on OOV, lenient maps to <UNK>") {
  const tasr::Lexicon lex = demo_lexicon();
  const tasr::Vocabulary v =
      tasr::build_vocab({"一种 信念"}, UnitKind::syllable, &lex);
  const auto lenient = tasr::encode("一种 不明", v, &lex);
  REQUIRE(lenient.size() == 3);  // YI1 ZHONG3 <UNK>
  CHECK(lenient[2] == tasr::kUnkId);
  CHECK_THROWS_WITH_AS(tasr::encode("一种 不明", v, &lex, nullptr, false),
                       doctest::Contains("不明"), tasr::Error);
}

TEST_CASE("multiple pronunciations resolve to the first entry") {
  tasr::Lexicon lex = demo_lexicon();
  lex.word_prons["一种"] = {{"YI1", "ZHONG3"}, {"YI2", "ZHONG3"}};
  lex.syllable_phones["YI2"] = {"Y", "IY2"};
  CHECK(tasr::expand_lexicon({"一种"}, lex, UnitKind::syllable) ==
        toks({"YI1", "ZHONG3"}));
}

TEST_CASE("decode_ids joins by unit kind") {
  const tasr::Lexicon lex = demo_lexicon();

  const tasr::Vocabulary chars =
      tasr::build_vocab({"一种 信念", "OK 好"}, UnitKind::character);
  CHECK(tasr::decode_ids(tasr::encode("一种 信念", chars), chars) == "一种信念");
  CHECK(tasr::decode_ids(tasr::encode("OK 好", chars), chars) == "OK 好");

  const tasr::Vocabulary words = tasr::build_vocab({"一种 信念"}, UnitKind::word);
  CHECK(tasr::decode_ids(tasr::encode("一种 信念", words), words) == "一种 信念");

  tasr::MergeTable merges;
  merges.merges = {{"一", "种"}};
  const tasr::Vocabulary subs =
      tasr::build_vocab({"一种 信念"}, UnitKind::subword, nullptr, &merges);
  CHECK(tasr::decode_ids(tasr::encode("一种 信念", subs, nullptr, &merges), subs) ==
        "一种 信念");

  const tasr::Vocabulary sylls =
      tasr::build_vocab({"一种 信念"}, UnitKind::syllable, &lex);
  CHECK(tasr::decode_ids(tasr::encode("一种 信念", sylls, &lex), sylls) ==
        "YI1 ZHONG3 XIN4 NIAN4");
}

TEST_CASE("round trip over random in-vocabulary word sentences") {
  const std::vector<std::string> corpus = {"一种 信念 你好", "再见 你好 OK",
                                           "信念 OK"};
  for (UnitKind kind : {UnitKind::word, UnitKind::character}) {
    const tasr::Vocabulary v = tasr::build_vocab(corpus, kind);
    std::mt19937_64 rng(3);
    const std::vector<std::string> words = {"一种", "信念", "你好", "再见", "OK"};
    std::uniform_int_distribution<size_t> pick(0, words.size() - 1);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<std::string> sent;
      std::uniform_int_distribution<int> len(1, 6);
      for (int i = len(rng); i > 0; --i) sent.push_back(words[pick(rng)]);
      const std::string s = tasr::join(sent, " ");
      const std::string back = tasr::decode_ids(tasr::encode(s, v), v);
      if (kind == UnitKind::word) {
        CHECK(back == s);
      } else {
        // Character joining drops spaces between adjacent Mandarin tokens.
        CHECK(tasr::segment(back, UnitKind::character) ==
              tasr::segment(s, UnitKind::character));
      }
    }
  }
}

TEST_CASE("token_of range checks and id_of bijection") {
  const tasr::Vocabulary v = tasr::build_vocab({"一种 信念"}, UnitKind::word);
  for (int id = 0; id < v.size(); ++id) CHECK(v.id_of(v.token_of(id)) == id);
  CHECK_THROWS_AS(v.token_of(v.size()), tasr::Error);
  CHECK_THROWS_AS(v.token_of(-1), tasr::Error);
}

TEST_CASE("vocabulary file round trip enforces the fixed header tokens") {
  const tasr::Vocabulary v = tasr::build_vocab({"一种 信念"}, UnitKind::character);
  const std::string path =
      (std::filesystem::temp_directory_path() / "tasr_vocab_rt.txt").string();
  tasr::save_vocab(v, path);
  const tasr::Vocabulary back = tasr::load_vocab(path, UnitKind::character);
  CHECK(back.tokens == v.tokens);
  CHECK(back.unit_kind == UnitKind::character);
  std::remove(path.c_str());

  const std::string bad =
      (std::filesystem::temp_directory_path() / "tasr_vocab_bad.txt").string();
  {
    std::ofstream out(bad);
    out << "<PAD>\n<UNK>\n一\n种\n";  // missing <S>/</S>
  }
  CHECK_THROWS_AS(tasr::load_vocab(bad, UnitKind::character), tasr::Error);
  std::remove(bad.c_str());
}

TEST_CASE("lexicon loader validates syllable coverage") {
  namespace fs = std::filesystem;
  const std::string wpath = (fs::temp_directory_path() / "tasr_lex_w.tsv").string();
  const std::string spath = (fs::temp_directory_path() / "tasr_lex_s.tsv").string();
  {
    std::ofstream w(wpath), s(spath);
    w << "一种\tYI1 ZHONG3\n";
    s << "YI1\tY IY1\n";  // ZHONG3 missing
  }
  CHECK_THROWS_WITH_AS(tasr::load_lexicon(wpath, spath),
                       doctest::Contains("ZHONG3"), tasr::Error);
  {
    std::ofstream s(spath);
    s << "YI1\tY IY1\nZHONG3\tJH UH3 NG3\n";
  }
  const tasr::Lexicon lex = tasr::load_lexicon(wpath, spath);
  CHECK(lex.word_prons.at("一种").front() == toks({"YI1", "ZHONG3"}));
  std::remove(wpath.c_str());
  std::remove(spath.c_str());
}
