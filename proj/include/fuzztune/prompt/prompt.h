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

#ifndef FUZZTUNE_PROMPT_PROMPT_H_
#define FUZZTUNE_PROMPT_PROMPT_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fuzztune/corpus/corpus.h"
#include "fuzztune/harvest/harvest.h"
#include "json.hpp"

namespace fuzztune::prompt {

enum class TemplateKind { kNone, kNlA, kNlB, kPlCpp, kPlJava, kPlPython };

std::string_view TemplateKindName(TemplateKind kind);
TemplateKind ParseTemplateKind(std::string_view name);

// The programming-language template matching `language`.
TemplateKind PlTemplateFor(corpus::Language language);

// Accepts every TemplateKindName plus "pl_auto", which picks PlTemplateFor.
TemplateKind ResolveTemplate(std::string_view name, corpus::Language language);

inline constexpr std::string_view kDefaultSep = "[SEP]";

struct PromptTemplate {
  TemplateKind kind = TemplateKind::kNone;
  std::string sep_token{kDefaultSep};
};

// One cloze-filled pair, starting with the separator. Throws
// PreconditionError for kNone.
std::string RenderPair(const harvest::TestCasePair& pair, const PromptTemplate& tmpl);

// Units are code points.
struct AssemblyBudget {
  size_t max_total_units = 16384;
  // Pairs may take the source's room only down to this share of the budget.
  double code_fraction = 0.75;

  void Validate() const;
};

struct AugmentedRecord {
  std::string program_id;
  std::string problem_id;
  std::string text;
  size_t n_pairs_used = 0;
  TemplateKind template_kind = TemplateKind::kNone;
  std::string split_tag;

  bool operator==(const AugmentedRecord&) const = default;
};

// Source first, then the rendered pairs in order. Over budget, whole pairs
// go from the end until the block fits in
//   max_total_units - min(|source|, floor(code_fraction * max_total_units)),
// then the source tail is cut to what remains. kNone yields the source
// verbatim.
AugmentedRecord BuildRecord(const corpus::Program& program,
                            const std::vector<harvest::TestCasePair>& pairs,
                            const PromptTemplate& tmpl, const AssemblyBudget& budget,
                            std::string split_tag = "");

nlohmann::ordered_json RecordToJson(const AugmentedRecord& record);
AugmentedRecord RecordFromJson(const nlohmann::json& j);

// One RecordToJson object per line.
void WriteDataset(const std::filesystem::path& path,
                  const std::vector<AugmentedRecord>& records);
std::vector<AugmentedRecord> ReadDataset(const std::filesystem::path& path);

}  // namespace fuzztune::prompt

#endif  // FUZZTUNE_PROMPT_PROMPT_H_
