// tasr/vocab.cpp

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

#include <fstream>
#include <set>

#include "tasr/common.hpp"
#include "tasr/text.hpp"

namespace tasr {

namespace {

const char* kExtraTokens[kNumExtraTokens] = {"<PAD>", "<UNK>", "<S>", "</S>"};

bool token_is_cjk(const std::string& token) {
  size_t pos = 0;
  return !token.empty() && is_cjk(utf8_next(token, pos));
}

}  // namespace

UnitKind unit_kind_from_string(const std::string& name) {
  if (name == "ci_phoneme") return UnitKind::ci_phoneme;
  if (name == "syllable") return UnitKind::syllable;
  if (name == "character") return UnitKind::character;
  if (name == "subword") return UnitKind::subword;
  if (name == "word") return UnitKind::word;
  throw Error("unknown unit kind: " + name);
}

std::string unit_kind_to_string(UnitKind kind) {
  switch (kind) {
    case UnitKind::ci_phoneme: return "ci_phoneme";
    case UnitKind::syllable: return "syllable";
    case UnitKind::character: return "character";
    case UnitKind::subword: return "subword";
    case UnitKind::word: return "word";
  }
  throw Error("invalid unit kind value");
}

const std::string& Vocabulary::token_of(int id) const {
  TASR_REQUIRE(id >= 0 && id < size(),
               "token id " + std::to_string(id) + " out of range");
  return tokens[id];
}

Lexicon load_lexicon(const std::string& word_path, const std::string& syllable_path) {
  Lexicon lex;
  {
    std::ifstream in(word_path);
    TASR_REQUIRE(in.good(), "cannot open lexicon file: " + word_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const size_t tab = line.find('\t');
      TASR_REQUIRE(tab != std::string::npos, word_path + ": malformed lexicon line: " + line);
      const std::string word = line.substr(0, tab);
      const std::vector<std::string> syls = split_whitespace(line.substr(tab + 1));
      TASR_REQUIRE(!syls.empty(), word_path + ": empty pronunciation for " + word);
      lex.word_prons[word].push_back(syls);
    }
  }
  {
    std::ifstream in(syllable_path);
    TASR_REQUIRE(in.good(), "cannot open syllable table: " + syllable_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const size_t tab = line.find('\t');
      TASR_REQUIRE(tab != std::string::npos,
                   syllable_path + ": malformed syllable line: " + line);
      const std::string syl = line.substr(0, tab);
      const std::vector<std::string> phones = split_whitespace(line.substr(tab + 1));
      TASR_REQUIRE(!phones.empty(), syllable_path + ": empty expansion for " + syl);
      lex.syllable_phones[syl] = phones;
    }
  }
  // Every syllable referenced by a word must expand to phonemes.
  for (const auto& [word, prons] : lex.word_prons)
    for (const auto& pron : prons)
      for (const auto& syl : pron)
        TASR_REQUIRE(lex.syllable_phones.count(syl) > 0,
                     "syllable \"" + syl + "\" of word \"" + word +
                         "\" has no phoneme expansion");
  return lex;
}

std::vector<std::string> segment_characters(const std::string& word) {
  std::vector<std::string> out;
  std::string run;
  size_t pos = 0;
  while (pos < word.size()) {
    const size_t start = pos;
    const char32_t cp = utf8_next(word, pos);
    if (is_cjk(cp)) {
      if (!run.empty()) {
        out.push_back(run);
        run.clear();
      }
      out.push_back(word.substr(start, pos - start));
    } else {
      run.append(word, start, pos - start);
    }
  }
  if (!run.empty()) out.push_back(run);
  return out;
}

std::vector<std::string> expand_lexicon(const std::vector<std::string>& words,
                                        const Lexicon& lex, UnitKind level) {
  TASR_REQUIRE(level == UnitKind::syllable || level == UnitKind::ci_phoneme,
               "expand_lexicon level must be syllable or ci_phoneme");
  std::vector<std::string> out;
  for (const std::string& word : words) {
    const auto it = lex.word_prons.find(word);
    TASR_REQUIRE(it != lex.word_prons.end(),
                 "word \"" + word + "\" is not in the lexicon");
    const std::vector<std::string>& pron = it->second.front();
    if (level == UnitKind::syllable) {
      out.insert(out.end(), pron.begin(), pron.end());
    } else {
      for (const std::string& syl : pron) {
        const auto ph = lex.syllable_phones.find(syl);
        TASR_REQUIRE(ph != lex.syllable_phones.end(),
                     "syllable \"" + syl + "\" has no phoneme expansion");
        out.insert(out.end(), ph->second.begin(), ph->second.end());
      }
    }
  }
  return out;
}

std::vector<std::string> segment(const std::string& transcript, UnitKind kind,
                                 const Lexicon* lex, const MergeTable* merges) {
  const std::vector<std::string> words = split_whitespace(transcript);
  std::vector<std::string> out;
  switch (kind) {
    case UnitKind::word:
      return words;
    case UnitKind::character:
      for (const std::string& w : words) {
        const auto toks = segment_characters(w);
        out.insert(out.end(), toks.begin(), toks.end());
      }
      return out;
    case UnitKind::subword:
      TASR_REQUIRE(merges != nullptr, "sub-word segmentation needs a merge table");
      for (const std::string& w : words) {
        const auto toks = apply_bpe(w, *merges);
        out.insert(out.end(), toks.begin(), toks.end());
      }
      return out;
    case UnitKind::syllable:
    case UnitKind::ci_phoneme:
      TASR_REQUIRE(lex != nullptr, "lexicon units need a lexicon");
      return expand_lexicon(words, *lex, kind);
  }
  throw Error("invalid unit kind value");
}

Vocabulary build_vocab(const std::vector<std::string>& transcripts, UnitKind kind,
                       const Lexicon* lex, const MergeTable* merges) {
  std::set<std::string> units;
  for (const std::string& t : transcripts) {
    const auto toks = segment(t, kind, lex, merges);
    units.insert(toks.begin(), toks.end());
  }
  Vocabulary vocab;
  vocab.unit_kind = kind;
  for (const char* extra : kExtraTokens) vocab.tokens.emplace_back(extra);
  vocab.tokens.insert(vocab.tokens.end(), units.begin(), units.end());
  for (int i = 0; i < vocab.size(); ++i) vocab.index[vocab.tokens[i]] = i;
  TASR_REQUIRE(vocab.index.size() == vocab.tokens.size(),
               "a transcript unit collides with a reserved token");
  return vocab;
}

std::vector<int> encode(const std::string& transcript, const Vocabulary& vocab,
                        const Lexicon* lex, const MergeTable* merges,
                        bool oov_to_unk) {
  std::vector<std::string> toks;
  const bool lexical = vocab.unit_kind == UnitKind::syllable ||
                       vocab.unit_kind == UnitKind::ci_phoneme;
  if (lexical && oov_to_unk) {
    // Expand word by word so one missing word degrades to a single <UNK>.
    TASR_REQUIRE(lex != nullptr, "lexicon units need a lexicon");
    for (const std::string& w : split_whitespace(transcript)) {
      if (lex->has_word(w)) {
        const auto exp = expand_lexicon({w}, *lex, vocab.unit_kind);
        toks.insert(toks.end(), exp.begin(), exp.end());
      } else {
        toks.push_back(kExtraTokens[kUnkId]);
      }
    }
  } else {
    toks = segment(transcript, vocab.unit_kind, lex, merges);
  }
  std::vector<int> ids;
  ids.reserve(toks.size());
  for (const std::string& t : toks) ids.push_back(vocab.id_of(t));
  return ids;
}

std::string decode_ids(const std::vector<int>& ids, const Vocabulary& vocab) {
  std::vector<std::string> toks;
  toks.reserve(ids.size());
  for (int id : ids) toks.push_back(vocab.token_of(id));

  switch (vocab.unit_kind) {
    case UnitKind::character: {
      std::string out;
      for (size_t i = 0; i < toks.size(); ++i) {
        if (i > 0 && (!token_is_cjk(toks[i - 1]) || !token_is_cjk(toks[i])))
          out += ' ';
        out += toks[i];
      }
      return out;
    }
    case UnitKind::subword:
      return join(bpe_restore(toks), " ");
    case UnitKind::word:
    case UnitKind::syllable:
    case UnitKind::ci_phoneme:
      return join(toks, " ");
  }
  throw Error("invalid unit kind value");
}

void save_vocab(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path);
  TASR_REQUIRE(out.good(), "cannot write vocabulary file: " + path);
  for (const std::string& t : vocab.tokens) out << t << "\n";
}

Vocabulary load_vocab(const std::string& path, UnitKind kind) {
  std::ifstream in(path);
  TASR_REQUIRE(in.good(), "cannot open vocabulary file: " + path);
  Vocabulary vocab;
  vocab.unit_kind = kind;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    vocab.tokens.push_back(line);
  }
  TASR_REQUIRE(vocab.size() >= kNumExtraTokens, path + ": vocabulary too small");
  for (int i = 0; i < kNumExtraTokens; ++i)
    TASR_REQUIRE(vocab.tokens[i] == kExtraTokens[i],
                 path + ": line " + std::to_string(i + 1) + " must be " +
                     kExtraTokens[i]);
  for (int i = 0; i < vocab.size(); ++i) {
    TASR_REQUIRE(vocab.index.emplace(vocab.tokens[i], i).second,
                 path + ": duplicate token \"" + vocab.tokens[i] + "\"");
  }
  return vocab;
}

}  // namespace tasr
