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

#include "fuzztune/prompt/prompt.h"

#include <algorithm>
#include <cmath>

#include "fuzztune/common/errors.h"
#include "fuzztune/common/fs_util.h"
#include "fuzztune/common/utf8.h"

namespace fuzztune::prompt {
namespace {

constexpr TemplateKind kAllKinds[] = {TemplateKind::kNone,   TemplateKind::kNlA,
                                      TemplateKind::kNlB,    TemplateKind::kPlCpp,
                                      TemplateKind::kPlJava, TemplateKind::kPlPython};

}  // namespace

std::string_view TemplateKindName(TemplateKind kind) {
  switch (kind) {
    case TemplateKind::kNone: return "none";
    case TemplateKind::kNlA: return "nl_a";
    case TemplateKind::kNlB: return "nl_b";
    case TemplateKind::kPlCpp: return "pl_cpp";
    case TemplateKind::kPlJava: return "pl_java";
    case TemplateKind::kPlPython: return "pl_python";
  }
  return "none";
}

TemplateKind ParseTemplateKind(std::string_view name) {
  for (TemplateKind k : kAllKinds) {
    if (TemplateKindName(k) == name) return k;
  }
  throw PreconditionError("unknown template '" + std::string(name) +
                          "' (expected none, nl_a, nl_b, pl_cpp, pl_java or pl_python)");
}

TemplateKind PlTemplateFor(corpus::Language language) {
  switch (language) {
    case corpus::Language::kCpp: return TemplateKind::kPlCpp;
    case corpus::Language::kJava: return TemplateKind::kPlJava;
    case corpus::Language::kPython: return TemplateKind::kPlPython;
  }
  return TemplateKind::kPlCpp;
}

TemplateKind ResolveTemplate(std::string_view name, corpus::Language language) {
  if (name == "pl_auto") return PlTemplateFor(language);
  return ParseTemplateKind(name);
}

std::string RenderPair(const harvest::TestCasePair& pair, const PromptTemplate& tmpl) {
  const std::string& in = pair.input_text;
  const std::string& out = pair.output_text;
  switch (tmpl.kind) {
    case TemplateKind::kNlA:
      return tmpl.sep_token + "input: " + in + "," + "output: " + out;
    case TemplateKind::kNlB:
      return tmpl.sep_token + "input is " + in + "and" + "output is " + out;
    case TemplateKind::kPlCpp:
      return tmpl.sep_token + "cin>>" + in + ";" + "cout<<" + out;
    case TemplateKind::kPlJava:
      return tmpl.sep_token + "System.in " + in + ";" + "System.out" + out;
    case TemplateKind::kPlPython:
      return tmpl.sep_token + "input()" + in + "\n" + "print" + out;
    case TemplateKind::kNone:
      break;
  }
  throw PreconditionError("template 'none' renders no pairs");
}

void AssemblyBudget::Validate() const {
  if (max_total_units == 0) throw PreconditionError("max_total_units must be >= 1");
  if (!(code_fraction >= 0.0 && code_fraction <= 1.0)) {
    throw PreconditionError("code_fraction must lie in [0, 1]");
  }
}

AugmentedRecord BuildRecord(const corpus::Program& program,
                            const std::vector<harvest::TestCasePair>& pairs,
                            const PromptTemplate& tmpl, const AssemblyBudget& budget,
                            std::string split_tag) {
  budget.Validate();
  AugmentedRecord rec;
  rec.program_id = program.id;
  rec.problem_id = program.problem_id;
  rec.template_kind = tmpl.kind;
  rec.split_tag = std::move(split_tag);
  if (tmpl.kind == TemplateKind::kNone) {
    rec.text = program.source;
    return rec;
  }

  const size_t total = budget.max_total_units;
  const size_t source_len = utf8::Length(program.source);
  const auto reserve = static_cast<size_t>(
      std::floor(budget.code_fraction * static_cast<double>(total)));
  const size_t pair_room = total - std::min(source_len, reserve);

  std::string block;
  size_t block_len = 0;
  for (const auto& pair : pairs) {
    std::string r = RenderPair(pair, tmpl);
    size_t len = utf8::Length(r);
    if (block_len + len > pair_room) break;
    block += r;
    block_len += len;
    ++rec.n_pairs_used;
  }
  const size_t source_room = total - block_len;
  if (source_len <= source_room) {
    rec.text = program.source;
  } else {
    rec.text = program.source.substr(0, utf8::PrefixBytes(program.source, source_room));
  }
  rec.text += block;
  return rec;
}

nlohmann::ordered_json RecordToJson(const AugmentedRecord& record) {
  nlohmann::ordered_json j;
  j["program_id"] = record.program_id;
  j["problem_id"] = record.problem_id;
  j["text"] = record.text;
  j["n_pairs_used"] = record.n_pairs_used;
  j["template_kind"] = TemplateKindName(record.template_kind);
  j["split_tag"] = record.split_tag;
  return j;
}

AugmentedRecord RecordFromJson(const nlohmann::json& j) {
  AugmentedRecord r;
  try {
    r.program_id = j.at("program_id").get<std::string>();
    r.problem_id = j.at("problem_id").get<std::string>();
    r.text = j.at("text").get<std::string>();
    r.n_pairs_used = j.at("n_pairs_used").get<size_t>();
    r.template_kind = ParseTemplateKind(j.at("template_kind").get<std::string>());
    r.split_tag = j.at("split_tag").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed dataset record: ") + e.what());
  }
  return r;
}

void WriteDataset(const std::filesystem::path& path,
                  const std::vector<AugmentedRecord>& records) {
  std::string text;
  for (const auto& r : records) {
    text += RecordToJson(r).dump();
    text += '\n';
  }
  WriteFileAtomic(path, std::string_view(text));
}

std::vector<AugmentedRecord> ReadDataset(const std::filesystem::path& path) {
  std::string text = ReadFileText(path);
  std::vector<AugmentedRecord> out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string_view line(text.data() + pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    try {
      out.push_back(RecordFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw PreconditionError(path.string() + ": " + e.what());
    }
  }
  return out;
}

}  // namespace fuzztune::prompt
