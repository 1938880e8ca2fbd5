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

#ifndef FUZZTUNE_COMMON_TOOLCHAIN_H_
#define FUZZTUNE_COMMON_TOOLCHAIN_H_

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace fuzztune {

// Compiler command template shared by repair and build.
struct Toolchain {
  std::string cxx = "clang++";
  std::string cc = "clang";
  std::vector<std::string> cxxflags = {"-std=c++17", "-w"};
  std::string opt_level = "-O1";
  std::chrono::milliseconds compile_timeout{120000};

  bool IsClang() const;
  // Flags that make diagnostics machine-readable for this compiler.
  std::vector<std::string> DiagnosticFlags() const;
};

struct CompileResult {
  bool ok = false;
  std::string output;  // compiler stderr
};

// Compiles and links `source` into `binary`. Throws EnvironmentError when
// the compiler cannot be started or times out.
CompileResult CompileCxx(const Toolchain& toolchain,
                         const std::filesystem::path& source,
                         const std::filesystem::path& binary,
                         const std::vector<std::string>& extra_args);

}  // namespace fuzztune

#endif  // FUZZTUNE_COMMON_TOOLCHAIN_H_
