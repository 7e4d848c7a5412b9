// tasr/score.hpp

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

#ifndef TASR_SCORE_HPP
#define TASR_SCORE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tasr {

struct ErrorCounts {
  int64_t substitutions = 0;
  int64_t insertions = 0;
  int64_t deletions = 0;
  int64_t ref_length = 0;

  int64_t total() const { return substitutions + insertions + deletions; }
};

// Scoring tokens: one per CJK code point, one per maximal Latin/digit run
// (case-folded), whitespace discarded.
std::vector<std::string> cer_tokenize(const std::string& text);

// Minimal S/I/D alignment with unit costs. Equal-cost backtraces prefer
// substitution over insertion over deletion.
ErrorCounts edit_distance(const std::vector<std::string>& ref,
                          const std::vector<std::string>& hyp);

// Pooled 100 * sum(S+I+D) / sum(ref_length) over the corpus. Pairs are
// (reference text, hypothesis text); tokenization happens here.
double corpus_cer(const std::vector<std::pair<std::string, std::string>>& pairs);

}  // namespace tasr

#endif  // TASR_SCORE_HPP
