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

#ifndef FUZZTUNE_FUZZER_FUZZER_H_
#define FUZZTUNE_FUZZER_FUZZER_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzztune/common/bytes.h"
#include "fuzztune/fuzzer/coverage_map.h"
#include "fuzztune/fuzzer/mutator.h"
#include "fuzztune/target/target.h"
#include "json.hpp"

namespace fuzztune::fuzzer {

struct FuzzConfig {
  double budget_minutes = 5;  // K
  std::chrono::milliseconds per_exec_timeout{1000};
  size_t max_input_len = target::kDefaultMaxInput;
  std::uint64_t rng_seed = 0;
  int havoc_iterations_per_entry = 256;
  // Consecutive havoc/splice executions without new behavior after which a
  // campaign whose deterministic stages are all done counts as exhausted.
  // Zero disables exhaustion.
  std::uint64_t exhaust_idle_havoc = 50000;
  std::uint64_t max_execs = 0;  // zero: unlimited
  // False runs the coverage-blind ablation: mutants are never enqueued.
  bool coverage_guided = true;
  int stability_retries = 3;
  size_t max_saved_crashes = 64;
  size_t max_saved_hangs = 64;

  void Validate() const;  // throws PreconditionError
  std::chrono::milliseconds Budget() const;
};

enum class Termination { kExhausted, kTimeout, kExecLimit, kAborted };

std::string_view TerminationName(Termination t);
Termination ParseTermination(std::string_view name);

struct QueueEntry {
  std::uint64_t id = 0;
  Bytes input;
  Signature signature;
  double exec_time_ms = 0;
  std::optional<std::uint64_t> parent;
  Stage stage_found = Stage::kSeed;
};

struct FuzzStats {
  std::uint64_t execs_total = 0;
  size_t edges_covered = 0;
  double wall_time_ms = 0;
  Termination termination = Termination::kExhausted;
  bool partial = false;  // set when the campaign aborted on ExecError
  std::string abort_reason;
  std::uint64_t crashes_total = 0;
  std::uint64_t hangs_total = 0;
  std::uint64_t unstable_entries = 0;
};

struct FuzzReport {
  std::vector<QueueEntry> queue;
  std::vector<Bytes> crashes;  // deduplicated by coverage
  std::vector<Bytes> hangs;
  FuzzStats stats;
};

// Observation points for tests and progress reporting.
struct FuzzHooks {
  std::function<void(ByteView input, const target::ExecResult& result, Stage stage,
                     const CoverageAccumulator& global)>
      on_exec;
  std::function<void(const QueueEntry& entry, const CoverageAccumulator& global)>
      on_enqueue;
};

// The single newline byte used when no seeds are supplied.
Bytes DefaultSeed();

// Runs one single-threaded campaign: seeds first, then FIFO over the queue
// with each entry's deterministic stages once and a havoc/splice batch per
// visit. Ends on the wall-clock budget, the exec limit, exhaustion, or an
// ExecError (partial report).
FuzzReport FuzzProgram(target::Target& target, std::vector<Bytes> seeds,
                       const FuzzConfig& config, const FuzzHooks& hooks = {});

// Union of the queue signatures' edge indices.
size_t EdgesOf(const std::vector<QueueEntry>& queue);

// queue/id_NNNNNN, crashes/id_NNNNNN, hangs/id_NNNNNN (raw bytes) and
// stats.json with per-entry metadata.
void WriteCampaign(const FuzzReport& report, const std::filesystem::path& dir);
FuzzReport ReadCampaign(const std::filesystem::path& dir);

nlohmann::json StatsToJson(const FuzzStats& stats);

}  // namespace fuzztune::fuzzer

#endif  // FUZZTUNE_FUZZER_FUZZER_H_
