// Copyright 2026 The FuzzTune Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FUZZTUNE_COMMON_UTF8_H_
#define FUZZTUNE_COMMON_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fuzztune/common/bytes.h"

namespace fuzztune::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes to code points. Each maximal ill-formed subsequence becomes one
// U+FFFD (the Unicode "maximal subpart" practice).
std::vector<char32_t> DecodeLossy(ByteView bytes);

bool IsValid(ByteView bytes);

void Append(std::string& out, char32_t cp);
std::string Encode(const std::vector<char32_t>& cps);

// Code point count of well-formed UTF-8 text.
size_t Length(std::string_view text);

// Byte length of the longest prefix holding at most `n` code points.
size_t PrefixBytes(std::string_view text, size_t n);

}  // namespace fuzztune::utf8

#endif  // FUZZTUNE_COMMON_UTF8_H_
