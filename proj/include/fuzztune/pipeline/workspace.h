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

#ifndef FUZZTUNE_PIPELINE_WORKSPACE_H_
#define FUZZTUNE_PIPELINE_WORKSPACE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzztune/corpus/corpus.h"
#include "fuzztune/corpus/split.h"
#include "fuzztune/pipeline/config.h"
#include "json.hpp"

namespace fuzztune::pipeline {

enum class Stage { kIngested, kRepaired, kBuilt, kFuzzed, kHarvested, kEmitted };

std::string_view StageName(Stage stage);
Stage ParseStage(std::string_view name);

// Persisted per program as programs/<dir>/state.json.
struct ProgramState {
  std::string program_id;
  Stage stage = Stage::kIngested;  // last completed stage
  std::string failed_step;         // "repair", "build", ... or empty
  std::string error;

  std::string repair_status;
  int repair_rounds = 0;
  std::string cov_binary;    // relative to the program directory
  std::string plain_binary;
  bool smoke_ok = false;
  std::string termination;
  std::uint64_t execs = 0;
  std::uint64_t edges = 0;
  size_t queue_size = 0;
  std::uint64_t crashes = 0;
  std::uint64_t hangs = 0;
  std::string harvest_key;
  size_t n_pairs = 0;
  std::string emit_key;

  bool failed() const { return !failed_step.empty(); }

  nlohmann::ordered_json ToJson() const;
  static ProgramState FromJson(const nlohmann::ordered_json& j);
};

// On-disk layout:
//   workspace.json  config.txt  manifest.json  splits.json (when splittable)
//   programs/<dir>/{source.*, state.json, repaired.*, repair.json,
//                   build-cov/, build-plain/, campaign/, testcases.jsonl,
//                   record.json}
class Workspace {
 public:
  // Reads the corpus at `corpus_root` into a new workspace whose snapshot is
  // the defaults plus `overrides`. Re-ingesting the same corpus is a no-op;
  // a different corpus or changed frozen keys throw PreconditionError.
  // CorpusError propagates.
  static Workspace Ingest(const std::filesystem::path& root,
                          const std::filesystem::path& corpus_root,
                          const Overrides& overrides,
                          std::vector<std::string>* warnings = nullptr);
  // Throws PreconditionError when `root` holds no completed ingest.
  static Workspace Open(const std::filesystem::path& root);
  static bool Exists(const std::filesystem::path& root);

  const std::filesystem::path& root() const { return root_; }
  const Config& snapshot() const { return snapshot_; }
  const corpus::Corpus& corpus() const { return corpus_; }
  const std::optional<corpus::Splits>& splits() const { return splits_; }
  const std::filesystem::path& corpus_root() const { return corpus_root_; }

  // Snapshot plus `overrides`; throws PreconditionError naming any frozen
  // key the overrides change.
  Config Effective(const Overrides& overrides) const;

  std::filesystem::path ProgramDir(std::string_view program_id) const;
  ProgramState LoadState(std::string_view program_id) const;
  void SaveState(const ProgramState& state) const;

 private:
  Workspace() = default;
  void Load();

  std::filesystem::path root_;
  std::filesystem::path corpus_root_;
  Config snapshot_;
  corpus::Corpus corpus_;
  std::optional<corpus::Splits> splits_;
};

}  // namespace fuzztune::pipeline

#endif  // FUZZTUNE_PIPELINE_WORKSPACE_H_
