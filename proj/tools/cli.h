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

#ifndef FUZZTUNE_TOOLS_CLI_H_
#define FUZZTUNE_TOOLS_CLI_H_

#include <atomic>
#include <ostream>
#include <string>
#include <vector>

namespace fuzztune::cli {

enum ExitCode {
  kExitOk = 0,
  kExitUsage = 1,
  kExitEnvironment = 2,
  kExitPartial = 3,
  kExitInterrupted = 130,
};

// Runs one command line (args[0] is the program name). Progress goes to
// `err`, results to `out`. `cancel`, when given, stops a run early.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
           std::atomic<bool>* cancel = nullptr);

}  // namespace fuzztune::cli

#endif  // FUZZTUNE_TOOLS_CLI_H_
