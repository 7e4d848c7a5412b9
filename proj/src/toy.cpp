// tasr/toy.cpp

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

#include "tasr/toy.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <iomanip>
#include <random>
#include <sstream>
#include <vector>

#include "tasr/common.hpp"
#include "tasr/data.hpp"
#include "tasr/text.hpp"
#include "tasr/vocab.hpp"
#include "tasr/wav.hpp"

namespace tasr {
namespace {

struct ToyWord {
  const char* word;
  const char* syllables;  // space-separated
};

// Two-character vocabulary with pinyin-style syllables.
constexpr ToyWord kWords[] = {
    {"一种", "YI1 ZHONG3"},   {"信念", "XIN4 NIAN4"},
    {"你好", "NI3 HAO3"},     {"再见", "ZAI4 JIAN4"},
    {"谢谢", "XIE4 XIE4"},    {"电话", "DIAN4 HUA4"},
    {"时间", "SHI2 JIAN1"},   {"朋友", "PENG2 YOU3"},
    {"工作", "GONG1 ZUO4"},   {"学习", "XUE2 XI2"},
    {"中国", "ZHONG1 GUO2"},  {"北京", "BEI3 JING1"},
    {"明天", "MING2 TIAN1"},  {"今天", "JIN1 TIAN1"},
    {"问题", "WEN4 TI2"},     {"老师", "LAO3 SHI1"},
    {"学生", "XUE2 SHENG1"},  {"电脑", "DIAN4 NAO3"},
    {"手机", "SHOU3 JI1"},    {"音乐", "YIN1 YUE4"},
};

struct ToySyllable {
  const char* syllable;
  const char* phones;  // space-separated context-independent phonemes
};

// Initials stay bare; vowels and codas carry the tone digit.
constexpr ToySyllable kSyllables[] = {
    {"YI1", "Y IY1"},          {"ZHONG3", "JH UH3 NG3"},
    {"XIN4", "X IY4 N4"},      {"NIAN4", "N IY4 AE4 N4"},
    {"NI3", "N IY3"},          {"HAO3", "HH AW3"},
    {"ZAI4", "Z AY4"},         {"JIAN4", "JH IY4 AE4 N4"},
    {"XIE4", "X IY4 EH4"},     {"DIAN4", "D IY4 AE4 N4"},
    {"HUA4", "HH UW4 AA4"},    {"SHI2", "SH IX2"},
    {"JIAN1", "JH IY1 AE1 N1"}, {"PENG2", "P EH2 NG2"},
    {"YOU3", "Y OW3"},         {"GONG1", "G UH1 NG1"},
    {"ZUO4", "Z UW4 AO4"},     {"XUE2", "X YU2 EH2"},
    {"XI2", "X IY2"},          {"ZHONG1", "JH UH1 NG1"},
    {"GUO2", "G UW2 AO2"},     {"BEI3", "B EY3"},
    {"JING1", "JH IY1 NG1"},   {"MING2", "M IY2 NG2"},
    {"TIAN1", "T IY1 AE1 N1"}, {"JIN1", "JH IY1 N1"},
    {"WEN4", "W EH4 N4"},      {"TI2", "T IY2"},
    {"LAO3", "L AW3"},         {"SHI1", "SH IX1"},
    {"SHENG1", "SH EH1 NG1"},  {"NAO3", "N AW3"},
    {"SHOU3", "SH OW3"},       {"JI1", "JH IY1"},
    {"YIN1", "Y IY1 N1"},      {"YUE4", "Y UE4 EH4"},
};

struct Speaker {
  const char* id;
  float gain;
  double freq_offset_hz;
};

constexpr Speaker kSpeakers[] = {
    {"spk0", 0.30f, 0.0},
    {"spk1", 0.26f, 6.0},
    {"spk2", 0.34f, -6.0},
    {"spk3", 0.28f, 12.0},
};

// Distinct characters get distinct, well-separated tone frequencies.
std::vector<std::string> character_inventory() {
  std::vector<std::string> chars;
  for (const ToyWord& w : kWords)
    for (const std::string& c : segment_characters(w.word)) {
      bool seen = false;
      for (const std::string& existing : chars) seen = seen || existing == c;
      if (!seen) chars.push_back(c);
    }
  return chars;
}

double character_frequency(const std::vector<std::string>& inventory,
                           const std::string& ch) {
  for (size_t i = 0; i < inventory.size(); ++i)
    if (inventory[i] == ch) return 300.0 + 70.0 * static_cast<double>(i);
  throw Error("character '" + ch + "' is not in the toy inventory");
}

WavData synthesize(const std::string& transcript, const Speaker& spk,
                   const std::vector<std::string>& inventory, int sample_rate_hz,
                   std::mt19937_64& rng) {
  const int tone_len = sample_rate_hz * 120 / 1000;
  const int gap_len = sample_rate_hz * 30 / 1000;
  const int edge_len = sample_rate_hz * 50 / 1000;
  const int fade_len = sample_rate_hz * 5 / 1000;

  WavData wav;
  wav.sample_rate_hz = sample_rate_hz;
  wav.samples.assign(static_cast<size_t>(edge_len), 0.0f);
  for (const std::string& word : split_whitespace(transcript)) {
    for (const std::string& ch : segment_characters(word)) {
      const double freq = character_frequency(inventory, ch) + spk.freq_offset_hz;
      for (int i = 0; i < tone_len; ++i) {
        double env = 1.0;
        if (i < fade_len) env = static_cast<double>(i) / fade_len;
        if (tone_len - 1 - i < fade_len)
          env = std::min(env, static_cast<double>(tone_len - 1 - i) / fade_len);
        wav.samples.push_back(static_cast<float>(
            spk.gain * env *
            std::sin(2.0 * M_PI * freq * i / sample_rate_hz)));
      }
      wav.samples.insert(wav.samples.end(), static_cast<size_t>(gap_len), 0.0f);
    }
  }
  wav.samples.insert(wav.samples.end(), static_cast<size_t>(edge_len), 0.0f);

  std::normal_distribution<double> noise(0.0, 0.004);
  for (float& s : wav.samples)
    s = std::clamp(static_cast<float>(s + noise(rng)), -0.999f, 0.999f);
  return wav;
}

std::string make_transcript(std::mt19937_64& rng, int min_words, int max_words) {
  std::uniform_int_distribution<int> n_words(min_words, max_words);
  std::uniform_int_distribution<size_t> pick(0, std::size(kWords) - 1);
  std::vector<std::string> words;
  const int n = n_words(rng);
  for (int i = 0; i < n; ++i) words.push_back(kWords[pick(rng)].word);
  return join(words, " ");
}

void write_split(const ToyCorpusConfig& cfg, const std::string& split,
                 int count, const std::vector<std::string>& inventory,
                 const std::string& manifest_path, std::mt19937_64& rng) {
  namespace fs = std::filesystem;
  Manifest m;
  m.split_tag = split;
  for (int i = 0; i < count; ++i) {
    std::ostringstream id;
    id << split << '-' << std::setfill('0') << std::setw(3) << i;
    const Speaker& spk = kSpeakers[i % std::size(kSpeakers)];

    Utterance utt;
    utt.id = id.str();
    utt.audio_path = "wav/" + utt.id + ".wav";
    utt.speaker_id = spk.id;
    utt.transcript = make_transcript(rng, cfg.min_words, cfg.max_words);
    const WavData wav =
        synthesize(utt.transcript, spk, inventory, cfg.sample_rate_hz, rng);
    write_wav((fs::path(cfg.out_dir) / utt.audio_path).string(), wav.samples,
              wav.sample_rate_hz);
    m.utterances.push_back(std::move(utt));
  }
  save_manifest(m, manifest_path);
}

}  // namespace

ToyCorpusPaths generate_toy_corpus(const ToyCorpusConfig& cfg) {
  namespace fs = std::filesystem;
  TASR_REQUIRE(!cfg.out_dir.empty(), "toy corpus needs an output directory");
  TASR_REQUIRE(cfg.train_utterances > 0 && cfg.test_utterances > 0,
               "utterance counts must be positive");
  TASR_REQUIRE(cfg.min_words >= 1 && cfg.max_words >= cfg.min_words,
               "bad words-per-utterance range");
  fs::create_directories(fs::path(cfg.out_dir) / "wav");

  ToyCorpusPaths paths;
  paths.wav_dir = (fs::path(cfg.out_dir) / "wav").string();
  paths.train_manifest = (fs::path(cfg.out_dir) / "train.tsv").string();
  paths.test_manifest = (fs::path(cfg.out_dir) / "test.tsv").string();
  paths.word_lexicon = (fs::path(cfg.out_dir) / "lexicon_words.tsv").string();
  paths.syllable_lexicon = (fs::path(cfg.out_dir) / "lexicon_syllables.tsv").string();

  {
    std::ofstream out(paths.word_lexicon);
    TASR_REQUIRE(out.good(), "cannot write " + paths.word_lexicon);
    for (const ToyWord& w : kWords) out << w.word << '\t' << w.syllables << '\n';
  }
  {
    std::ofstream out(paths.syllable_lexicon);
    TASR_REQUIRE(out.good(), "cannot write " + paths.syllable_lexicon);
    for (const ToySyllable& s : kSyllables)
      out << s.syllable << '\t' << s.phones << '\n';
  }

  const std::vector<std::string> inventory = character_inventory();
  std::mt19937_64 rng(cfg.seed);
  write_split(cfg, "train", cfg.train_utterances, inventory,
              paths.train_manifest, rng);
  write_split(cfg, "test", cfg.test_utterances, inventory, paths.test_manifest,
              rng);
  return paths;
}

}  // namespace tasr
