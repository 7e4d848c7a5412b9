// tasr/wav.cpp

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

#include "tasr/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "tasr/common.hpp"

namespace tasr {

namespace {

uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

uint16_t read_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

void write_u32(std::ostream& out, uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                     static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(b, 4);
}

void write_u16(std::ostream& out, uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF)};
  out.write(b, 2);
}

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  TASR_REQUIRE(in.good(), "cannot open wav file: " + path);

  char tag[5] = {0};
  in.read(tag, 4);
  TASR_REQUIRE(std::strncmp(tag, "RIFF", 4) == 0, path + ": not a RIFF file");
  read_u32(in);  // riff size
  in.read(tag, 4);
  TASR_REQUIRE(std::strncmp(tag, "WAVE", 4) == 0, path + ": not a WAVE file");

  WavData wav;
  int bits = 0, channels = 0;
  bool got_fmt = false, got_data = false;
  while (in.read(tag, 4)) {
    const uint32_t chunk_size = read_u32(in);
    if (std::strncmp(tag, "fmt ", 4) == 0) {
      const uint16_t audio_format = read_u16(in);
      channels = read_u16(in);
      wav.sample_rate_hz = static_cast<int>(read_u32(in));
      read_u32(in);  // byte rate
      read_u16(in);  // block align
      bits = read_u16(in);
      if (chunk_size > 16) in.seekg(chunk_size - 16, std::ios::cur);
      TASR_REQUIRE(audio_format == 1, path + ": only PCM wav is supported");
      got_fmt = true;
    } else if (std::strncmp(tag, "data", 4) == 0) {
      TASR_REQUIRE(got_fmt, path + ": data chunk before fmt chunk");
      TASR_REQUIRE(channels == 1, path + ": only mono wav is supported");
      TASR_REQUIRE(bits == 16, path + ": only 16-bit wav is supported");
      const size_t n = chunk_size / 2;
      std::vector<int16_t> raw(n);
      in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(chunk_size));
      TASR_REQUIRE(in.good(), path + ": truncated data chunk");
      wav.samples.resize(n);
      for (size_t i = 0; i < n; ++i) wav.samples[i] = raw[i] / 32768.0f;
      got_data = true;
      break;
    } else {
      in.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
    }
  }
  TASR_REQUIRE(got_data, path + ": no data chunk found");
  return wav;
}

void write_wav(const std::string& path, const std::vector<float>& samples,
               int sample_rate_hz) {
  TASR_REQUIRE(sample_rate_hz > 0, "sample rate must be positive");
  std::ofstream out(path, std::ios::binary);
  TASR_REQUIRE(out.good(), "cannot write wav file: " + path);

  const uint32_t data_bytes = static_cast<uint32_t>(samples.size() * 2);
  out.write("RIFF", 4);
  write_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<uint32_t>(sample_rate_hz));
  write_u32(out, static_cast<uint32_t>(sample_rate_hz * 2));
  write_u16(out, 2);
  write_u16(out, 16);
  out.write("data", 4);
  write_u32(out, data_bytes);
  for (float s : samples) {
    const float clipped = std::clamp(s, -1.0f, 1.0f);
    const int16_t q = static_cast<int16_t>(std::lrintf(clipped * 32767.0f));
    write_u16(out, static_cast<uint16_t>(q));
  }
}

}  // namespace tasr
