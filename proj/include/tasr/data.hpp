// tasr/data.hpp

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

#ifndef TASR_DATA_HPP
#define TASR_DATA_HPP

#include <string>
#include <vector>

namespace tasr {

struct Utterance {
  std::string id;
  std::string audio_path;
  std::string speaker_id;
  std::string transcript;
};

// Immutable after load; iteration order is sorted by id.
struct Manifest {
  std::vector<Utterance> utterances;
  std::string split_tag;  // train, dev or test

  size_t size() const { return utterances.size(); }
  bool empty() const { return utterances.empty(); }
  auto begin() const { return utterances.begin(); }
  auto end() const { return utterances.end(); }
};

// Reads a UTF-8 TSV manifest: id<TAB>audio_path<TAB>speaker_id<TAB>transcript.
// Lines starting with '#' are comments. Rows come back sorted by id;
// duplicate ids and short rows are errors (reported with line numbers).
Manifest load_manifest(const std::string& path, const std::string& split_tag = "train");

void save_manifest(const Manifest& m, const std::string& path);

// Collapses whitespace runs, trims, and deletes the '·' and '+' tokens.
// Total and idempotent.
std::string normalize_transcript(const std::string& raw);

// Speed-perturbed copies carry an id suffix: "<id>@0.9" or "<id>@1.1".
// Returns the factor encoded in the id (1.0 when there is no suffix) and
// strips it from base_id.
double perturb_factor_from_id(const std::string& id, std::string* base_id = nullptr);

std::string perturbed_id(const std::string& id, double factor);

// Audio paths in a manifest may be relative; they resolve against the
// directory holding the manifest file.
std::string resolve_audio_path(const std::string& manifest_path,
                               const std::string& audio_path);

}  // namespace tasr

#endif  // TASR_DATA_HPP
