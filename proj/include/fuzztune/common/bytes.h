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

#ifndef FUZZTUNE_COMMON_BYTES_H_
#define FUZZTUNE_COMMON_BYTES_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fuzztune {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline Bytes ToBytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

inline std::string ToString(ByteView b) {
  return std::string(b.begin(), b.end());
}

// Base64 (standard alphabet, padded).
std::string Base64Encode(ByteView data);
Bytes Base64Decode(std::string_view text);

}  // namespace fuzztune

#endif  // FUZZTUNE_COMMON_BYTES_H_
