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

#ifndef FUZZTUNE_PIPELINE_PIPELINE_H_
#define FUZZTUNE_PIPELINE_PIPELINE_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fuzztune/pipeline/config.h"
#include "fuzztune/pipeline/workspace.h"
#include "fuzztune/target/build.h"
#include "json.hpp"

namespace fuzztune::pipeline {

struct RunOptions {
  Stage until = Stage::kEmitted;
  // Dataset, splits, stats and config copy; empty means <workspace>/out.
  std::filesystem::path out_dir;
  // Programs whose state records a failure are retried.
  bool retry_failed = false;
  // Set from another thread to stop between stages (and inside campaigns).
  std::atomic<bool>* cancel = nullptr;
  std::function<void(const std::string&)> log;
  // Replace the compiler-backed builds (tests use scripted targets).
  std::shared_ptr<const target::CoverageBackend> instrumented;
  std::shared_ptr<const target::CoverageBackend> plain;
};

struct RunStats {
  size_t programs = 0;  // in the active set
  size_t compiled = 0;  // repair reached compiles
  size_t built = 0;
  size_t fuzzed = 0;    // campaign terminated without aborting
  size_t failed = 0;
  std::map<std::string, size_t> failed_by_step;
  std::map<std::string, size_t> terminations;
  double mean_queue_size = 0;  // over fuzzed programs
  size_t total_pairs = 0;
  size_t programs_with_pairs = 0;
  size_t records = 0;
  bool cancelled = false;

  double CompiledPct() const;
  double FuzzedPct() const;          // of compiled
  double PairsPerProgram() const;    // per fuzzed program
  double WithPairsPct() const;       // of fuzzed
  double FailedFraction() const;     // of programs

  nlohmann::ordered_json ToJson() const;
};

// Program ids the run covers: every program, or the subsampled splits when
// subsample.ratio < 1.
std::vector<std::string> ActiveProgramIds(const Workspace& ws, const Config& config,
                                          std::optional<corpus::Splits>* splits = nullptr);

// Advances every active program to `options.until`, skipping work its state
// already records. Per-program failures are recorded, never thrown. Reaching
// kEmitted also writes dataset.jsonl, splits.json, stats.json and config.txt
// to the output directory. EnvironmentError (e.g. no compiler) stops the run
// and propagates.
RunStats Run(const Workspace& ws, const Config& config, const RunOptions& options);

// Stats from the persisted program states alone.
RunStats CollectStats(const Workspace& ws, const Config& config);

}  // namespace fuzztune::pipeline

#endif  // FUZZTUNE_PIPELINE_PIPELINE_H_
