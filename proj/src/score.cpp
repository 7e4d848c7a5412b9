// tasr/score.cpp

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

#include "tasr/score.hpp"

#include <cctype>

#include "tasr/common.hpp"
#include "tasr/text.hpp"

namespace tasr {

std::vector<std::string> cer_tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string run;
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t start = pos;
    const char32_t cp = utf8_next(text, pos);
    if (is_latin_or_digit(cp)) {
      run += text.substr(start, pos - start);
      continue;
    }
    if (!run.empty()) {
      out.push_back(ascii_lower(run));
      run.clear();
    }
    if (cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r') continue;
    out.push_back(text.substr(start, pos - start));
  }
  if (!run.empty()) out.push_back(ascii_lower(run));
  return out;
}

ErrorCounts edit_distance(const std::vector<std::string>& ref,
                          const std::vector<std::string>& hyp) {
  const size_t m = ref.size(), n = hyp.size();
  std::vector<std::vector<int>> d(m + 1, std::vector<int>(n + 1, 0));
  for (size_t i = 0; i <= m; ++i) d[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= n; ++j) d[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= m; ++i)
    for (size_t j = 1; j <= n; ++j) {
      const int sub = d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const int ins = d[i][j - 1] + 1;
      const int del = d[i - 1][j] + 1;
      d[i][j] = std::min({sub, ins, del});
    }

  ErrorCounts counts;
  counts.ref_length = static_cast<int64_t>(m);
  size_t i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && d[i][j] == d[i - 1][j - 1]) {
      --i, --j;
    } else if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1) {
      ++counts.substitutions;
      --i, --j;
    } else if (j > 0 && d[i][j] == d[i][j - 1] + 1) {
      ++counts.insertions;
      --j;
    } else {
      ++counts.deletions;
      --i;
    }
  }
  return counts;
}

double corpus_cer(const std::vector<std::pair<std::string, std::string>>& pairs) {
  TASR_REQUIRE(!pairs.empty(), "no scoring pairs");
  int64_t errors = 0, ref_len = 0;
  for (const auto& [ref_text, hyp_text] : pairs) {
    const ErrorCounts c = edit_distance(cer_tokenize(ref_text), cer_tokenize(hyp_text));
    errors += c.total();
    ref_len += c.ref_length;
  }
  TASR_REQUIRE(ref_len > 0, "all references are empty");
  return 100.0 * static_cast<double>(errors) / static_cast<double>(ref_len);
}

}  // namespace tasr
