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

#ifndef FUZZTUNE_COMMON_FS_UTIL_H_
#define FUZZTUNE_COMMON_FS_UTIL_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "fuzztune/common/bytes.h"

namespace fuzztune {

namespace fs = std::filesystem;

Bytes ReadFileBytes(const fs::path& path);
std::string ReadFileText(const fs::path& path);

// Writes via a sibling temp file and rename(2), so readers never observe a
// partially written file.
void WriteFileAtomic(const fs::path& path, ByteView data);
void WriteFileAtomic(const fs::path& path, std::string_view text);

// Owns a fresh directory and removes it recursively on destruction.
class ScopedTempDir {
 public:
  explicit ScopedTempDir(std::string_view prefix = "fuzztune");
  ScopedTempDir(const ScopedTempDir&) = delete;
  ScopedTempDir& operator=(const ScopedTempDir&) = delete;
  ScopedTempDir(ScopedTempDir&& other) noexcept;
  ScopedTempDir& operator=(ScopedTempDir&& other) noexcept;
  ~ScopedTempDir();

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Maps an arbitrary id onto a single safe path component.
std::string SafePathComponent(std::string_view id);

}  // namespace fuzztune

#endif  // FUZZTUNE_COMMON_FS_UTIL_H_
