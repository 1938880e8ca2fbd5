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

#ifndef FUZZTUNE_COMMON_ERRORS_H_
#define FUZZTUNE_COMMON_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fuzztune {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The host is missing something we need (compiler binary, writable scratch
// space). Distinct from a program under test misbehaving.
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation's documented contract.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class CorpusError : public Error {
 public:
  using Error::Error;
};

class BuildError : public Error {
 public:
  BuildError(const std::string& what, std::string compiler_output)
      : Error(what), compiler_output_(std::move(compiler_output)) {}

  const std::string& compiler_output() const { return compiler_output_; }

 private:
  std::string compiler_output_;
};

// Infrastructure failure while executing a target (not a program behavior).
class ExecError : public Error {
 public:
  using Error::Error;
};

}  // namespace fuzztune

#endif  // FUZZTUNE_COMMON_ERRORS_H_
