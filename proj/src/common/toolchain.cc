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

#include "fuzztune/common/toolchain.h"

#include "fuzztune/common/errors.h"
#include "fuzztune/common/subprocess.h"

namespace fuzztune {

bool Toolchain::IsClang() const {
  return std::filesystem::path(cxx).filename().string().find("clang") !=
         std::string::npos;
}

std::vector<std::string> Toolchain::DiagnosticFlags() const {
  if (IsClang()) {
    return {"-fno-color-diagnostics", "-fno-caret-diagnostics",
            "-ferror-limit=0"};
  }
  return {"-fdiagnostics-color=never", "-fno-diagnostics-show-caret",
          "-fmax-errors=0"};
}

CompileResult CompileCxx(const Toolchain& toolchain,
                         const std::filesystem::path& source,
                         const std::filesystem::path& binary,
                         const std::vector<std::string>& extra_args) {
  SubprocessOptions opts;
  opts.argv.push_back(toolchain.cxx);
  for (const auto& f : toolchain.cxxflags) opts.argv.push_back(f);
  for (const auto& f : extra_args) opts.argv.push_back(f);
  opts.argv.push_back(source.string());
  opts.argv.push_back("-o");
  opts.argv.push_back(binary.string());
  opts.timeout = toolchain.compile_timeout;
  opts.capture_stderr = true;
  opts.stdout_cap = 16 * 1024;
  SubprocessResult r = RunSubprocess(opts);
  if (r.timed_out) {
    throw EnvironmentError("compiler '" + toolchain.cxx + "' timed out");
  }
  CompileResult out;
  out.ok = r.exited && r.exit_code == 0;
  out.output = std::move(r.stderr_text);
  if (!r.stdout_data.empty()) out.output.append(ToString(r.stdout_data));
  return out;
}

}  // namespace fuzztune
