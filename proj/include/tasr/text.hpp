// tasr/text.hpp

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

#ifndef TASR_TEXT_HPP
#define TASR_TEXT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace tasr {

// Decodes the UTF-8 sequence starting at s[pos], advances pos past it and
// returns the code point. Malformed bytes are consumed one at a time and
// returned as U+FFFD.
char32_t utf8_next(const std::string& s, size_t& pos);

// Splits into code points, each re-encoded as its own UTF-8 string.
std::vector<std::string> utf8_chars(const std::string& s);

std::string utf8_encode(char32_t cp);

// CJK unified ideographs (the BMP blocks plus extensions).
bool is_cjk(char32_t cp);

bool is_latin_or_digit(char32_t cp);

// Splits on runs of ASCII whitespace; no empty fields.
std::vector<std::string> split_whitespace(const std::string& s);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

// ASCII-only lowercase fold.
std::string ascii_lower(const std::string& s);

}  // namespace tasr

#endif  // TASR_TEXT_HPP
