// tasr/vocab.hpp

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

#ifndef TASR_VOCAB_HPP
#define TASR_VOCAB_HPP

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "tasr/bpe.hpp"
#include "tasr/common.hpp"

namespace tasr {

enum class UnitKind { ci_phoneme, syllable, character, subword, word };

UnitKind unit_kind_from_string(const std::string& name);
std::string unit_kind_to_string(UnitKind kind);

// Ids 0..3 are always <PAD>, <UNK>, <S>, </S>; regular tokens follow in
// lexicographic order, so rebuilt vocabularies get stable ids.
struct Vocabulary {
  std::vector<std::string> tokens;
  std::unordered_map<std::string, int> index;
  UnitKind unit_kind = UnitKind::character;

  int size() const { return static_cast<int>(tokens.size()); }

  // <UNK> for anything unseen.
  int id_of(const std::string& token) const {
    const auto it = index.find(token);
    return it == index.end() ? kUnkId : it->second;
  }
  const std::string& token_of(int id) const;
};

// word -> pronunciations (each an ordered syllable sequence), plus the
// syllable -> CI-phoneme expansion table. encode() always takes the first
// listed pronunciation.
struct Lexicon {
  std::map<std::string, std::vector<std::vector<std::string>>> word_prons;
  std::map<std::string, std::vector<std::string>> syllable_phones;

  bool has_word(const std::string& word) const {
    return word_prons.count(word) > 0;
  }
};

// word<TAB>syl1 syl2 ...; repeated words accumulate pronunciations in file
// order. The syllable table file is syllable<TAB>ph1 ph2 ....
Lexicon load_lexicon(const std::string& word_path, const std::string& syllable_path);

// Character-unit segmentation: each CJK code point alone, each contiguous
// non-CJK run (e.g. an English word) as one token.
std::vector<std::string> segment_characters(const std::string& word);

// Expands space-separated words into syllables, or further into
// CI-phonemes. Out-of-lexicon words are errors naming the word.
std::vector<std::string> expand_lexicon(const std::vector<std::string>& words,
                                        const Lexicon& lex, UnitKind level);

// Collects the distinct units of the (normalized) training transcripts and
// prepends the four extra tokens. syllable/ci_phoneme need a lexicon,
// subword needs a merge table.
Vocabulary build_vocab(const std::vector<std::string>& transcripts, UnitKind kind,
                       const Lexicon* lex = nullptr,
                       const MergeTable* merges = nullptr);

// Kind-specific segmentation of one normalized transcript followed by id
// lookup. Unknown units map to <UNK>; with oov_to_unk=false a lexicon miss
// throws instead. <S>/</S> are not included.
std::vector<int> encode(const std::string& transcript, const Vocabulary& vocab,
                        const Lexicon* lex = nullptr,
                        const MergeTable* merges = nullptr,
                        bool oov_to_unk = true);

// Token segmentation without the id lookup.
std::vector<std::string> segment(const std::string& transcript, UnitKind kind,
                                 const Lexicon* lex = nullptr,
                                 const MergeTable* merges = nullptr);

// Inverse of encode up to <UNK>: characters concatenate with spaces only
// around Latin tokens, words space-join, sub-words restore then space-join.
std::string decode_ids(const std::vector<int>& ids, const Vocabulary& vocab);

// One token per line, id = 0-based line number.
void save_vocab(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocab(const std::string& path, UnitKind kind);

}  // namespace tasr

#endif  // TASR_VOCAB_HPP
