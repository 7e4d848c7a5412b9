// tasr/toy.hpp

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

#ifndef TASR_TOY_HPP
#define TASR_TOY_HPP

#include <cstdint>
#include <string>

namespace tasr {

// A miniature synthetic Mandarin corpus for end-to-end checks: every
// character is rendered as a pure tone at a character-specific frequency,
// so transcripts are fully recoverable from the audio. Generation is
// deterministic given the seed.
struct ToyCorpusConfig {
  std::string out_dir;
  int train_utterances = 200;
  int test_utterances = 20;
  int min_words = 2;
  int max_words = 5;
  int sample_rate_hz = 8000;
  uint64_t seed = 7;
};

struct ToyCorpusPaths {
  std::string train_manifest;
  std::string test_manifest;
  std::string word_lexicon;
  std::string syllable_lexicon;
  std::string wav_dir;
};

ToyCorpusPaths generate_toy_corpus(const ToyCorpusConfig& cfg);

}  // namespace tasr

#endif  // TASR_TOY_HPP
