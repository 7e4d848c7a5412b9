// tasr/wav.hpp

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

#ifndef TASR_WAV_HPP
#define TASR_WAV_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace tasr {

struct WavData {
  int sample_rate_hz = 0;
  std::vector<float> samples;  // mono, scaled to [-1, 1)
};

// 16-bit mono PCM only; anything else is an error.
WavData read_wav(const std::string& path);

void write_wav(const std::string& path, const std::vector<float>& samples,
               int sample_rate_hz);

}  // namespace tasr

#endif  // TASR_WAV_HPP
