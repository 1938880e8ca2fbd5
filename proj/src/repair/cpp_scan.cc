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

#include "cpp_scan.h"

#include <cctype>

namespace fuzztune::repair::internal {

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<bool> CodeMask(std::string_view src) {
  enum State { kCode, kLineComment, kBlockComment, kString, kChar };
  std::vector<bool> mask(src.size(), false);
  State st = kCode;
  for (size_t i = 0; i < src.size(); ++i) {
    char c = src[i];
    char next = i + 1 < src.size() ? src[i + 1] : '\0';
    switch (st) {
      case kCode:
        if (c == '/' && next == '/') {
          st = kLineComment;
          ++i;
        } else if (c == '/' && next == '*') {
          st = kBlockComment;
          ++i;
        } else if (c == '"') {
          st = kString;
        } else if (c == '\'' && !(i > 0 && std::isdigit(static_cast<unsigned char>(src[i - 1])) &&
                                  std::isxdigit(static_cast<unsigned char>(next)))) {
          st = kChar;
        } else {
          mask[i] = true;
        }
        break;
      case kLineComment:
        if (c == '\n') {
          st = kCode;
          mask[i] = true;
        } else if (c == '\\' && next == '\n') {
          ++i;
        }
        break;
      case kBlockComment:
        if (c == '*' && next == '/') {
          st = kCode;
          ++i;
        }
        break;
      case kString:
        if (c == '\\') {
          ++i;
        } else if (c == '"' || c == '\n') {
          st = kCode;
        }
        break;
      case kChar:
        if (c == '\\') {
          ++i;
        } else if (c == '\'' || c == '\n') {
          st = kCode;
        }
        break;
    }
  }
  return mask;
}

std::vector<IdentRef> Identifiers(std::string_view src,
                                  const std::vector<bool>& mask) {
  std::vector<IdentRef> out;
  bool line_start = true;
  bool preprocessor = false;
  bool include = false;
  for (size_t i = 0; i < src.size();) {
    char c = src[i];
    if (c == '\n') {
      if (!(i > 0 && src[i - 1] == '\\')) preprocessor = include = false;
      line_start = true;
      ++i;
      continue;
    }
    if (!mask[i]) {
      ++i;
      continue;
    }
    if (line_start && c == '#') {
      preprocessor = true;
      size_t j = i + 1;
      while (j < src.size() && (src[j] == ' ' || src[j] == '\t')) ++j;
      include = src.substr(j, 7) == "include";
    }
    if (!std::isspace(static_cast<unsigned char>(c))) line_start = false;
    if (IsIdentStart(c) && (i == 0 || !IsIdentChar(src[i - 1]))) {
      size_t j = i;
      while (j < src.size() && mask[j] && IsIdentChar(src[j])) ++j;
      IdentRef ref;
      ref.offset = i;
      ref.length = j - i;
      ref.preprocessor = preprocessor;
      ref.in_include = include;
      size_t k = i;
      while (k > 0 && mask[k - 1] && std::isspace(static_cast<unsigned char>(src[k - 1]))) --k;
      if (k >= 1 && mask[k - 1] && src[k - 1] == '.') ref.qualified = true;
      if (k >= 2 && mask[k - 1] && mask[k - 2] &&
          ((src[k - 2] == ':' && src[k - 1] == ':') ||
           (src[k - 2] == '-' && src[k - 1] == '>'))) {
        ref.qualified = true;
      }
      out.push_back(ref);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < src.size() && mask[i] && (IsIdentChar(src[i]) || src[i] == '.')) ++i;
      continue;
    }
    ++i;
  }
  return out;
}

std::optional<size_t> OffsetOf(std::string_view src, Location loc) {
  if (loc.line < 1 || loc.column < 1) return std::nullopt;
  size_t pos = 0;
  for (int line = 1; line < loc.line; ++line) {
    size_t nl = src.find('\n', pos);
    if (nl == std::string_view::npos) return std::nullopt;
    pos = nl + 1;
  }
  size_t off = pos + static_cast<size_t>(loc.column - 1);
  if (off > src.size()) return std::nullopt;
  return off;
}

Location LocationOf(std::string_view src, size_t offset) {
  Location loc{1, 1};
  for (size_t i = 0; i < offset && i < src.size(); ++i) {
    if (src[i] == '\n') {
      ++loc.line;
      loc.column = 1;
    } else {
      ++loc.column;
    }
  }
  return loc;
}

std::optional<std::string> IdentifierAt(std::string_view src, size_t offset) {
  if (offset >= src.size() || !IsIdentChar(src[offset])) return std::nullopt;
  size_t b = offset;
  while (b > 0 && IsIdentChar(src[b - 1])) --b;
  size_t e = offset;
  while (e < src.size() && IsIdentChar(src[e])) ++e;
  if (!IsIdentStart(src[b])) return std::nullopt;
  return std::string(src.substr(b, e - b));
}

std::optional<size_t> MatchBracket(std::string_view src,
                                   const std::vector<bool>& mask, size_t open) {
  if (open >= src.size() || !mask[open]) return std::nullopt;
  const char o = src[open];
  const char c = o == '{' ? '}' : o == '(' ? ')' : o == '[' ? ']' : '\0';
  if (!c) return std::nullopt;
  int depth = 0;
  for (size_t i = open; i < src.size(); ++i) {
    if (!mask[i]) continue;
    if (src[i] == o) ++depth;
    if (src[i] == c && --depth == 0) return i;
  }
  return std::nullopt;
}

std::optional<MainFunction> FindMain(std::string_view src,
                                     const std::vector<bool>& mask) {
  auto idents = Identifiers(src, mask);
  int depth = 0;
  size_t scanned = 0;
  for (size_t n = 0; n < idents.size(); ++n) {
    const IdentRef& id = idents[n];
    for (; scanned < id.offset; ++scanned) {
      if (!mask[scanned]) continue;
      if (src[scanned] == '{') ++depth;
      if (src[scanned] == '}') --depth;
    }
    if (depth != 0 || id.preprocessor || id.qualified ||
        src.substr(id.offset, id.length) != "main") {
      continue;
    }
    size_t p = id.offset + id.length;
    while (p < src.size() && std::isspace(static_cast<unsigned char>(src[p]))) ++p;
    if (p >= src.size() || src[p] != '(') continue;
    auto close_paren = MatchBracket(src, mask, p);
    if (!close_paren) continue;
    size_t q = *close_paren + 1;
    while (q < src.size() && (!mask[q] || std::isspace(static_cast<unsigned char>(src[q])))) ++q;
    if (q >= src.size() || src[q] != '{') continue;
    auto close_brace = MatchBracket(src, mask, q);
    if (!close_brace) continue;
    MainFunction m;
    m.name_offset = id.offset;
    m.body_open = q;
    m.body_close = *close_brace;
    if (n > 0) {
      const IdentRef& prev = idents[n - 1];
      bool adjacent = true;
      for (size_t k = prev.offset + prev.length; k < id.offset; ++k) {
        if (mask[k] && !std::isspace(static_cast<unsigned char>(src[k]))) {
          adjacent = false;
          break;
        }
      }
      if (adjacent && !prev.preprocessor) m.return_type = prev;
    }
    return m;
  }
  return std::nullopt;
}

}  // namespace fuzztune::repair::internal
