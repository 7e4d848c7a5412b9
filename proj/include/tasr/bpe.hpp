// tasr/bpe.hpp

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

#ifndef TASR_BPE_HPP
#define TASR_BPE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tasr {

// Continuation marker carried by every sub-word except the last one of a word.
inline const std::string kBpeMarker = "@@";

struct MergeTable {
  // Earlier entries have higher priority. No duplicates.
  std::vector<std::pair<std::string, std::string>> merges;

  size_t num_merges() const { return merges.size(); }
};

// One left-to-right pass replacing adjacent (left, right) with left+right,
// consuming greedily (overlaps are not re-merged). Both the learner and the
// applier segment through this exact routine.
std::vector<std::string> merge_pair(const std::vector<std::string>& symbols,
                                    const std::string& left,
                                    const std::string& right);

// Starts each word as its character sequence and repeatedly merges the most
// frequent adjacent pair (weighted by word count, ties broken by
// lexicographic (left, right)). Stops early once the best pair occurs fewer
// than 2 times.
MergeTable learn_bpe(const std::map<std::string, int64_t>& word_counts,
                     int num_merges);

// Segments one word by applying the merges in table order, then suffixes the
// continuation marker on all but the final symbol.
std::vector<std::string> apply_bpe(const std::string& word, const MergeTable& table);

// Inverse of segmentation: joins marker-continued runs back into words.
// A trailing marker at the end of the sequence is an error.
std::vector<std::string> bpe_restore(const std::vector<std::string>& symbols);

// Upper bound on the symbol vocabulary: initial characters plus one new
// symbol per completed merge.
int64_t subword_vocab_size(int64_t initial_vocab, int64_t num_merges);

// Merges file: header "#bpe v1 <num_merges>", then "left right" per line.
void save_merges(const MergeTable& table, const std::string& path);
MergeTable load_merges(const std::string& path);

}  // namespace tasr

#endif  // TASR_BPE_HPP
