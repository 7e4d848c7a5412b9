// tasr/bpe.cpp

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

#include "tasr/bpe.hpp"

#include <fstream>
#include <sstream>

#include "tasr/common.hpp"
#include "tasr/text.hpp"

namespace tasr {

std::vector<std::string> merge_pair(const std::vector<std::string>& symbols,
                                    const std::string& left,
                                    const std::string& right) {
  std::vector<std::string> out;
  out.reserve(symbols.size());
  size_t i = 0;
  while (i < symbols.size()) {
    if (i + 1 < symbols.size() && symbols[i] == left && symbols[i + 1] == right) {
      out.push_back(left + right);
      i += 2;
    } else {
      out.push_back(symbols[i]);
      i += 1;
    }
  }
  return out;
}

MergeTable learn_bpe(const std::map<std::string, int64_t>& word_counts,
                     int num_merges) {
  TASR_REQUIRE(!word_counts.empty(), "BPE corpus is empty");
  TASR_REQUIRE(num_merges >= 0, "num_merges must be non-negative");

  std::vector<std::vector<std::string>> words;
  std::vector<int64_t> counts;
  words.reserve(word_counts.size());
  for (const auto& [word, count] : word_counts) {
    TASR_REQUIRE(!word.empty(), "empty word in BPE corpus");
    words.push_back(utf8_chars(word));
    counts.push_back(count);
  }

  MergeTable table;
  for (int iter = 0; iter < num_merges; ++iter) {
    std::map<std::pair<std::string, std::string>, int64_t> stats;
    for (size_t w = 0; w < words.size(); ++w)
      for (size_t i = 0; i + 1 < words[w].size(); ++i)
        stats[{words[w][i], words[w][i + 1]}] += counts[w];
    if (stats.empty()) break;

    // Highest count wins; the map's lexicographic key order breaks ties.
    auto best = stats.begin();
    for (auto it = stats.begin(); it != stats.end(); ++it)
      if (it->second > best->second) best = it;
    if (best->second < 2) break;

    table.merges.push_back(best->first);
    for (auto& word : words)
      word = merge_pair(word, best->first.first, best->first.second);
  }
  return table;
}

std::vector<std::string> apply_bpe(const std::string& word, const MergeTable& table) {
  TASR_REQUIRE(!word.empty(), "cannot segment an empty word");
  std::vector<std::string> symbols = utf8_chars(word);
  for (const auto& [left, right] : table.merges)
    symbols = merge_pair(symbols, left, right);
  for (size_t i = 0; i + 1 < symbols.size(); ++i) symbols[i] += kBpeMarker;
  return symbols;
}

std::vector<std::string> bpe_restore(const std::vector<std::string>& symbols) {
  std::vector<std::string> words;
  std::string cur;
  for (const std::string& sym : symbols) {
    if (sym.size() >= kBpeMarker.size() &&
        sym.compare(sym.size() - kBpeMarker.size(), kBpeMarker.size(), kBpeMarker) == 0) {
      cur += sym.substr(0, sym.size() - kBpeMarker.size());
    } else {
      cur += sym;
      words.push_back(cur);
      cur.clear();
    }
  }
  TASR_REQUIRE(cur.empty(), "dangling continuation marker at end of sub-word sequence");
  return words;
}

int64_t subword_vocab_size(int64_t initial_vocab, int64_t num_merges) {
  TASR_REQUIRE(initial_vocab >= 0 && num_merges >= 0,
               "vocabulary sizes must be non-negative");
  return initial_vocab + num_merges;
}

void save_merges(const MergeTable& table, const std::string& path) {
  std::ofstream out(path);
  TASR_REQUIRE(out.good(), "cannot write merges file: " + path);
  out << "#bpe v1 " << table.num_merges() << "\n";
  for (const auto& [left, right] : table.merges) out << left << ' ' << right << "\n";
}

MergeTable load_merges(const std::string& path) {
  std::ifstream in(path);
  TASR_REQUIRE(in.good(), "cannot open merges file: " + path);
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string tag, version;
  size_t declared = 0;
  hs >> tag >> version >> declared;
  TASR_REQUIRE(tag == "#bpe" && version == "v1", path + ": bad merges header");

  MergeTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const size_t space = line.find(' ');
    TASR_REQUIRE(space != std::string::npos, path + ": malformed merge line: " + line);
    table.merges.emplace_back(line.substr(0, space), line.substr(space + 1));
  }
  TASR_REQUIRE(table.num_merges() == declared,
               path + ": merge count does not match header");
  return table;
}

}  // namespace tasr
