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

#include "fuzztune/common/utf8.h"

namespace fuzztune::utf8 {
namespace {

struct LeadInfo {
  int length;                  // total sequence length, 0 if invalid lead
  std::uint8_t second_lo;      // allowed range of the first continuation
  std::uint8_t second_hi;
};

LeadInfo ClassifyLead(std::uint8_t b) {
  if (b < 0x80) return {1, 0, 0};
  if (b >= 0xC2 && b <= 0xDF) return {2, 0x80, 0xBF};
  if (b == 0xE0) return {3, 0xA0, 0xBF};
  if ((b >= 0xE1 && b <= 0xEC) || b == 0xEE || b == 0xEF) return {3, 0x80, 0xBF};
  if (b == 0xED) return {3, 0x80, 0x9F};
  if (b == 0xF0) return {4, 0x90, 0xBF};
  if (b >= 0xF1 && b <= 0xF3) return {4, 0x80, 0xBF};
  if (b == 0xF4) return {4, 0x80, 0x8F};
  return {0, 0, 0};
}

}  // namespace

std::vector<char32_t> DecodeLossy(ByteView bytes) {
  std::vector<char32_t> out;
  out.reserve(bytes.size());
  size_t i = 0;
  while (i < bytes.size()) {
    std::uint8_t lead = bytes[i];
    LeadInfo info = ClassifyLead(lead);
    if (info.length == 1) {
      out.push_back(lead);
      ++i;
      continue;
    }
    if (info.length == 0) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    char32_t cp = lead & (0xFF >> (info.length + 1));
    size_t j = 1;
    for (; j < static_cast<size_t>(info.length); ++j) {
      if (i + j >= bytes.size()) break;
      std::uint8_t c = bytes[i + j];
      std::uint8_t lo = j == 1 ? info.second_lo : 0x80;
      std::uint8_t hi = j == 1 ? info.second_hi : 0xBF;
      if (c < lo || c > hi) break;
      cp = (cp << 6) | (c & 0x3F);
    }
    if (j == static_cast<size_t>(info.length)) {
      out.push_back(cp);
    } else {
      out.push_back(kReplacement);
    }
    i += j;
  }
  return out;
}

bool IsValid(ByteView bytes) {
  size_t i = 0;
  while (i < bytes.size()) {
    LeadInfo info = ClassifyLead(bytes[i]);
    if (info.length == 0) return false;
    for (int j = 1; j < info.length; ++j) {
      if (i + j >= bytes.size()) return false;
      std::uint8_t c = bytes[i + j];
      std::uint8_t lo = j == 1 ? info.second_lo : 0x80;
      std::uint8_t hi = j == 1 ? info.second_hi : 0xBF;
      if (c < lo || c > hi) return false;
    }
    i += info.length;
  }
  return true;
}

void Append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string Encode(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) Append(out, cp);
  return out;
}

size_t Length(std::string_view text) {
  size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

size_t PrefixBytes(std::string_view text, size_t n) {
  size_t seen = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
      if (seen == n) return i;
      ++seen;
    }
  }
  return text.size();
}

}  // namespace fuzztune::utf8
