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

#ifndef FUZZTUNE_COMMON_SUBPROCESS_H_
#define FUZZTUNE_COMMON_SUBPROCESS_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fuzztune/common/bytes.h"

namespace fuzztune {

struct SubprocessOptions {
  std::vector<std::string> argv;
  // "KEY=VALUE" entries added on top of the parent environment.
  std::vector<std::string> extra_env;
  // Delivered on fd 0; /dev/null when absent.
  std::optional<std::filesystem::path> stdin_path;
  std::filesystem::path cwd;
  // Zero disables the wall-clock limit.
  std::chrono::milliseconds timeout{0};
  size_t stdout_cap = 64 * 1024;
  bool capture_stderr = false;
  size_t stderr_cap = 256 * 1024;
  // RLIMIT_AS in bytes; zero leaves it alone.
  std::uint64_t memory_limit = 0;
};

struct SubprocessResult {
  bool exited = false;   // normal exit (exit_code valid)
  int exit_code = 0;
  int term_signal = 0;   // nonzero when killed by a signal
  bool timed_out = false;
  Bytes stdout_data;
  bool stdout_truncated = false;
  std::string stderr_text;
  double elapsed_ms = 0;
};

// Runs argv[0] (PATH lookup) to completion or timeout. Throws
// EnvironmentError when the binary cannot be executed at all.
SubprocessResult RunSubprocess(const SubprocessOptions& options);

}  // namespace fuzztune

#endif  // FUZZTUNE_COMMON_SUBPROCESS_H_
