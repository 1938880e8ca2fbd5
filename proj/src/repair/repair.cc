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

#include "fuzztune/repair/repair.h"

#include "fuzztune/common/errors.h"
#include "fuzztune/common/fs_util.h"

namespace fuzztune::repair {

std::string_view RepairStatusName(RepairStatus status) {
  return status == RepairStatus::kCompiles ? "compiles" : "unfixable";
}

CppAdapter::CppAdapter(Toolchain toolchain, RepairOptions options)
    : toolchain_(std::move(toolchain)), options_(options) {}

std::vector<Diagnostic> CppAdapter::Diagnose(std::string_view source) const {
  ScopedTempDir scratch("fuzztune-repair");
  const fs::path src = scratch.path() / "main.cpp";
  WriteFileAtomic(src, source);
  std::vector<std::string> extra = toolchain_.DiagnosticFlags();
  extra.push_back("-O0");
  CompileResult r = CompileCxx(toolchain_, src, scratch.path() / "a.out", extra);
  if (r.ok) return {};
  std::vector<Diagnostic> diags = ParseCompilerOutput(r.output, "main.cpp", source);
  if (diags.empty()) {
    // Link errors and the like carry no source location.
    Diagnostic d;
    d.raw_message = r.output.empty() ? "compilation failed" : r.output;
    diags.push_back(std::move(d));
  }
  return diags;
}

std::string CppAdapter::ApplyFix(std::string_view source, const Diagnostic& diag,
                                 RepairAction* action) const {
  return repair::ApplyFix(source, diag, options_, action);
}

std::unique_ptr<LanguageAdapter> MakeAdapter(corpus::Language language,
                                             const Toolchain& toolchain,
                                             const RepairOptions& options) {
  if (language != corpus::Language::kCpp) {
    throw PreconditionError("no repair adapter for language '" +
                            std::string(corpus::LanguageName(language)) + "'");
  }
  return std::make_unique<CppAdapter>(toolchain, options);
}

std::vector<Diagnostic> Diagnose(std::string_view source,
                                 corpus::Language language,
                                 const Toolchain& toolchain) {
  return MakeAdapter(language, toolchain, {})->Diagnose(source);
}

RepairedProgram RepairLoop(const corpus::Program& program,
                           const LanguageAdapter& adapter, int max_rounds) {
  if (max_rounds < 1) throw PreconditionError("max_rounds must be >= 1");
  if (program.language != adapter.language()) {
    throw PreconditionError("adapter language does not match program " + program.id);
  }
  RepairedProgram out;
  out.program_id = program.id;
  out.language = program.language;
  out.final_source = program.source;
  for (int round = 1; round <= max_rounds; ++round) {
    out.rounds_used = round;
    std::vector<Diagnostic> diags = adapter.Diagnose(out.final_source);
    if (diags.empty()) {
      out.status = RepairStatus::kCompiles;
      out.last_compiler_output.clear();
      return out;
    }
    out.last_compiler_output.clear();
    for (const auto& d : diags) {
      out.last_compiler_output += d.raw_message;
      out.last_compiler_output += '\n';
    }
    if (round == max_rounds) break;
    bool changed = false;
    for (const auto& d : diags) {
      if (d.kind == DiagKind::kOther) continue;
      RepairAction action;
      std::string next = adapter.ApplyFix(out.final_source, d, &action);
      if (next != out.final_source) {
        out.final_source = std::move(next);
        out.actions.push_back(std::move(action));
        changed = true;
        break;
      }
    }
    if (!changed) break;  // fixpoint
  }
  out.status = RepairStatus::kUnfixable;
  return out;
}

nlohmann::json RepairReportToJson(const RepairedProgram& repaired) {
  nlohmann::json actions = nlohmann::json::array();
  for (const auto& a : repaired.actions) {
    actions.push_back({{"kind", DiagKindName(a.kind)},
                       {"line", a.location.line},
                       {"column", a.location.column},
                       {"description", a.description},
                       {"noop", a.noop}});
  }
  return {{"program_id", repaired.program_id},
          {"language", corpus::LanguageName(repaired.language)},
          {"status", RepairStatusName(repaired.status)},
          {"rounds_used", repaired.rounds_used},
          {"actions", actions},
          {"last_compiler_output", repaired.last_compiler_output}};
}

RepairedProgram RepairReportFromJson(const nlohmann::json& j) {
  RepairedProgram r;
  r.program_id = j.at("program_id").get<std::string>();
  r.language = corpus::ParseLanguage(j.at("language").get<std::string>());
  r.status = j.at("status").get<std::string>() == "compiles"
                 ? RepairStatus::kCompiles
                 : RepairStatus::kUnfixable;
  r.rounds_used = j.at("rounds_used").get<int>();
  for (const auto& a : j.at("actions")) {
    RepairAction act;
    act.kind = ParseDiagKind(a.at("kind").get<std::string>());
    act.location = {a.at("line").get<int>(), a.at("column").get<int>()};
    act.description = a.at("description").get<std::string>();
    act.noop = a.value("noop", false);
    r.actions.push_back(std::move(act));
  }
  r.last_compiler_output = j.value("last_compiler_output", "");
  return r;
}

}  // namespace fuzztune::repair
