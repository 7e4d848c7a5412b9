// tasr/data.cpp

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

#include "tasr/data.hpp"

#include <algorithm>
#include <fstream>
#include <filesystem>
#include <set>
#include <sstream>

#include "tasr/common.hpp"
#include "tasr/text.hpp"

namespace tasr {

Manifest load_manifest(const std::string& path, const std::string& split_tag) {
  std::ifstream in(path);
  TASR_REQUIRE(in.good(), "cannot open manifest file: " + path);

  Manifest m;
  m.split_tag = split_tag;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    // id, audio_path, speaker_id, then everything else is the transcript.
    std::vector<std::string> fields;
    size_t start = 0;
    for (int f = 0; f < 3; ++f) {
      const size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        std::ostringstream os;
        os << path << ":" << line_no << ": malformed manifest line, expected "
           << "at least 4 tab-separated fields";
        throw Error(os.str());
      }
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    Utterance u;
    u.id = fields[0];
    u.audio_path = fields[1];
    u.speaker_id = fields[2];
    u.transcript = normalize_transcript(line.substr(start));
    if (!seen.insert(u.id).second) {
      std::ostringstream os;
      os << path << ":" << line_no << ": duplicate utterance id \"" << u.id << "\"";
      throw Error(os.str());
    }
    TASR_REQUIRE(!u.transcript.empty(),
                 path + ":" + std::to_string(line_no) + ": empty transcript for id \"" + u.id + "\"");
    m.utterances.push_back(std::move(u));
  }
  std::sort(m.utterances.begin(), m.utterances.end(),
            [](const Utterance& a, const Utterance& b) { return a.id < b.id; });
  return m;
}

void save_manifest(const Manifest& m, const std::string& path) {
  std::ofstream out(path);
  TASR_REQUIRE(out.good(), "cannot write manifest file: " + path);
  for (const Utterance& u : m) {
    out << u.id << '\t' << u.audio_path << '\t' << u.speaker_id << '\t'
        << u.transcript << '\n';
  }
}

std::string normalize_transcript(const std::string& raw) {
  // Drop the two non-character tokens, then re-collapse whitespace.
  std::string cleaned;
  size_t pos = 0;
  while (pos < raw.size()) {
    const size_t start = pos;
    const char32_t cp = utf8_next(raw, pos);
    if (cp == U'+' || cp == 0x00B7) continue;  // '+' and '·'
    cleaned.append(raw, start, pos - start);
  }
  return join(split_whitespace(cleaned), " ");
}

double perturb_factor_from_id(const std::string& id, std::string* base_id) {
  double factor = 1.0;
  std::string base = id;
  const size_t at = id.rfind('@');
  if (at != std::string::npos && at + 1 < id.size()) {
    const std::string suffix = id.substr(at + 1);
    char* end = nullptr;
    const double f = std::strtod(suffix.c_str(), &end);
    if (end && *end == '\0' && f > 0.0) {
      factor = f;
      base = id.substr(0, at);
    }
  }
  if (base_id) *base_id = base;
  return factor;
}

std::string perturbed_id(const std::string& id, double factor) {
  if (factor == 1.0) return id;
  std::ostringstream os;
  os << id << '@' << factor;
  return os.str();
}

std::string resolve_audio_path(const std::string& manifest_path,
                               const std::string& audio_path) {
  namespace fs = std::filesystem;
  const fs::path audio(audio_path);
  if (audio.is_absolute()) return audio_path;
  return (fs::path(manifest_path).parent_path() / audio).string();
}

}  // namespace tasr
