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

#ifndef FUZZTUNE_REPAIR_CPP_SCAN_H_
#define FUZZTUNE_REPAIR_CPP_SCAN_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzztune/repair/repair.h"

namespace fuzztune::repair::internal {

// Per-byte flag: true where the byte is program text rather than a
// comment, string literal or character literal.
std::vector<bool> CodeMask(std::string_view src);

struct IdentRef {
  size_t offset = 0;
  size_t length = 0;
  // Preceded by "::", "." or "->".
  bool qualified = false;
  // Inside a preprocessor line.
  bool preprocessor = false;
  bool in_include = false;
};

std::vector<IdentRef> Identifiers(std::string_view src,
                                  const std::vector<bool>& mask);

bool IsIdentStart(char c);
bool IsIdentChar(char c);

// Byte offset of a 1-based (line, column); nullopt when out of range.
std::optional<size_t> OffsetOf(std::string_view src, Location loc);
Location LocationOf(std::string_view src, size_t offset);

// The identifier covering or starting at `offset`, if any.
std::optional<std::string> IdentifierAt(std::string_view src, size_t offset);

// Offset of the matching close bracket for the open bracket at `open`,
// counting only code bytes.
std::optional<size_t> MatchBracket(std::string_view src,
                                   const std::vector<bool>& mask, size_t open);

struct MainFunction {
  size_t name_offset = 0;       // of the "main" token
  size_t body_open = 0;         // '{'
  size_t body_close = 0;        // matching '}'
  std::optional<IdentRef> return_type;  // token preceding "main", if any
};

std::optional<MainFunction> FindMain(std::string_view src,
                                     const std::vector<bool>& mask);

}  // namespace fuzztune::repair::internal

#endif  // FUZZTUNE_REPAIR_CPP_SCAN_H_
