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

#ifndef FUZZTUNE_REPAIR_REPAIR_H_
#define FUZZTUNE_REPAIR_REPAIR_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzztune/common/toolchain.h"
#include "fuzztune/corpus/corpus.h"
#include "json.hpp"

namespace fuzztune::repair {

enum class DiagKind {
  kMissingHeader,
  kMissingReturn,
  kReservedKeywordMisuse,
  kStructMissingSemicolon,
  kUndeclaredIdentifier,
  kOther,
};

std::string_view DiagKindName(DiagKind kind);
DiagKind ParseDiagKind(std::string_view name);

struct Location {
  int line = 0;    // 1-based
  int column = 0;  // 1-based, in bytes
  friend bool operator==(const Location&, const Location&) = default;
};

struct Diagnostic {
  DiagKind kind = DiagKind::kOther;
  std::optional<Location> location;
  std::optional<std::string> symbol;
  std::string raw_message;
};

// Maps one compiler error message to a Diagnostic. `source` is consulted to
// tell a misused keyword from an ordinary syntax error.
Diagnostic Classify(std::string_view message, std::optional<Location> location,
                    std::string_view source);

// Parses the compiler's stderr for errors in `file_name`. Notes, warnings
// and messages about other files are ignored.
std::vector<Diagnostic> ParseCompilerOutput(std::string_view output,
                                            std::string_view file_name,
                                            std::string_view source);

struct RepairOptions {
  long long constant_value = 100000;
  int max_rounds = 10;
};

struct RepairAction {
  DiagKind kind = DiagKind::kOther;
  Location location;
  std::string description;
  bool noop = false;
};

// The versioned umbrella block prepended by the missing_header fix.
std::string_view UmbrellaBlock();
inline constexpr std::string_view kUmbrellaMarker = "// fuzztune umbrella v1";

// Applies the fix for one classified diagnostic. Returns the source
// unchanged (and marks `action` as a no-op) when the fix site cannot be
// located or the fix is already in place. Throws PreconditionError for
// kOther.
std::string ApplyFix(std::string_view source, const Diagnostic& diag,
                     const RepairOptions& options, RepairAction* action);

enum class RepairStatus { kCompiles, kUnfixable };

std::string_view RepairStatusName(RepairStatus status);

struct RepairedProgram {
  std::string program_id;
  corpus::Language language = corpus::Language::kCpp;
  std::string final_source;
  std::vector<RepairAction> actions;
  RepairStatus status = RepairStatus::kUnfixable;
  int rounds_used = 0;
  std::string last_compiler_output;  // from the final failing round
};

nlohmann::json RepairReportToJson(const RepairedProgram& repaired);
// Restores everything except final_source, which the caller reattaches.
RepairedProgram RepairReportFromJson(const nlohmann::json& j);

// Per-language diagnose/fix strategy.
class LanguageAdapter {
 public:
  virtual ~LanguageAdapter() = default;
  virtual corpus::Language language() const = 0;
  // Empty iff the source builds. Each call compiles in a private scratch
  // directory, so one adapter may serve many threads.
  virtual std::vector<Diagnostic> Diagnose(std::string_view source) const = 0;
  virtual std::string ApplyFix(std::string_view source, const Diagnostic& diag,
                               RepairAction* action) const = 0;
};

class CppAdapter : public LanguageAdapter {
 public:
  explicit CppAdapter(Toolchain toolchain = {}, RepairOptions options = {});

  corpus::Language language() const override { return corpus::Language::kCpp; }
  std::vector<Diagnostic> Diagnose(std::string_view source) const override;
  std::string ApplyFix(std::string_view source, const Diagnostic& diag,
                       RepairAction* action) const override;

  const Toolchain& toolchain() const { return toolchain_; }

 private:
  Toolchain toolchain_;
  RepairOptions options_;
};

// Throws PreconditionError for languages without an adapter (java, python).
std::unique_ptr<LanguageAdapter> MakeAdapter(corpus::Language language,
                                             const Toolchain& toolchain,
                                             const RepairOptions& options);

std::vector<Diagnostic> Diagnose(std::string_view source,
                                 corpus::Language language,
                                 const Toolchain& toolchain = {});

// diagnose -> fix until the source builds, no fix applies, or max_rounds
// diagnoses have run. Each round applies one fix: the first classified
// diagnostic whose fix changes the source.
RepairedProgram RepairLoop(const corpus::Program& program,
                           const LanguageAdapter& adapter, int max_rounds = 10);

}  // namespace fuzztune::repair

#endif  // FUZZTUNE_REPAIR_REPAIR_H_
