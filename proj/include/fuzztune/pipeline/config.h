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

#ifndef FUZZTUNE_PIPELINE_CONFIG_H_
#define FUZZTUNE_PIPELINE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fuzztune/common/rational.h"
#include "fuzztune/common/toolchain.h"
#include "fuzztune/corpus/split.h"
#include "fuzztune/fuzzer/fuzzer.h"
#include "fuzztune/harvest/harvest.h"
#include "fuzztune/prompt/prompt.h"
#include "fuzztune/repair/repair.h"
#include "fuzztune/target/target.h"

namespace fuzztune::pipeline {

enum class ValueType { kUint, kReal, kBool, kText, kChoice, kFraction };

struct KeyInfo {
  std::string_view name;
  std::string_view default_value;
  ValueType type;
  // Fixed by the workspace snapshot once ingest has run.
  bool frozen;
  std::string_view help;
  std::vector<std::string_view> choices = {};
};

// Explicit settings in application order (later entries win).
using Overrides = std::vector<std::pair<std::string, std::string>>;

// Flat key=value settings. Every key has a default; Set validates.
class Config {
 public:
  Config();

  static const std::vector<KeyInfo>& Keys();
  static const KeyInfo& Info(std::string_view key);  // PreconditionError if unknown

  void Set(std::string_view key, std::string_view value);
  const std::string& Get(std::string_view key) const;
  std::uint64_t GetUint(std::string_view key) const;
  double GetReal(std::string_view key) const;
  bool GetBool(std::string_view key) const;
  Rational GetFraction(std::string_view key) const;

  // "key = value" lines; blank lines and '#' comments ignored.
  Config With(const Overrides& overrides) const;

  void MergeText(std::string_view text, std::string_view origin = "config");
  void MergeFile(const std::filesystem::path& path);
  // Parses a config file into overrides without applying them.
  static Overrides ReadOverrides(std::string_view text, std::string_view origin);
  std::string Serialize() const;

  // Cross-checks the derived stage settings. Throws PreconditionError.
  void Validate() const;

  // Frozen keys whose values differ.
  std::vector<std::string> FrozenDiff(const Config& other) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

Toolchain ToolchainOf(const Config& c);
repair::RepairOptions RepairOptionsOf(const Config& c);
target::TargetInfo LimitsOf(const Config& c);
// Seeded per program from the workspace seed.
fuzzer::FuzzConfig FuzzConfigOf(const Config& c, std::string_view program_id);
harvest::HarvestLimits HarvestLimitsOf(const Config& c);
harvest::DecodeMode DecodeModeOf(const Config& c);
prompt::AssemblyBudget BudgetOf(const Config& c);
corpus::SplitSpec SplitSpecOf(const Config& c);

}  // namespace fuzztune::pipeline

#endif  // FUZZTUNE_PIPELINE_CONFIG_H_
