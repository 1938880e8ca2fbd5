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

#ifndef FUZZTUNE_HARVEST_HARVEST_H_
#define FUZZTUNE_HARVEST_HARVEST_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fuzztune/common/bytes.h"
#include "fuzztune/fuzzer/fuzzer.h"
#include "fuzztune/target/target.h"
#include "json.hpp"

namespace fuzztune::harvest {

enum class DecodeMode { kRawBytes, kUtf8 };

std::string_view DecodeModeName(DecodeMode mode);
DecodeMode ParseDecodeMode(std::string_view name);

// kUtf8: lossy UTF-8 (U+FFFD per ill-formed subsequence), control
// characters other than '\n' and '\t' removed, runs of 3+ newlines cut to 2.
// kRawBytes: printable ASCII kept, everything else (and '\\') as \xHH.
std::string Decode(ByteView bytes, DecodeMode mode);

struct TestCasePair {
  Bytes input_bytes;
  Bytes output_bytes;
  std::string input_text;
  std::string output_text;
  target::ExecStatus status = target::ExecStatus::kOk;
  DecodeMode decode_mode = DecodeMode::kUtf8;

  bool operator==(const TestCasePair&) const = default;
};

struct HarvestLimits {
  size_t max_pairs = 5;
  size_t max_pair_chars = 200;  // input + output, in code points

  void Validate() const;
};

struct ReplayResult {
  Bytes output;
  target::ExecStatus status = target::ExecStatus::kOk;
  bool truncated = false;
};

// Throws PreconditionError for an instrumented target.
ReplayResult Replay(target::Target& plain, ByteView input);

struct HarvestStats {
  size_t replayed = 0;
  size_t dropped_fault = 0;      // crash or hang on replay
  size_t dropped_truncated = 0;
  size_t dropped_long = 0;
  size_t dropped_excluded = 0;   // input is a recorded crash or hang
  size_t replay_errors = 0;
  std::vector<std::string> messages;
};

// First `max_pairs` usable pairs in queue order. The length filter uses the
// UTF-8 decoding in both modes, so both modes select the same inputs.
// Inputs equal to an entry of `excluded` are skipped without replay.
std::vector<TestCasePair> HarvestProgram(target::Target& plain,
                                         const std::vector<Bytes>& queue,
                                         const HarvestLimits& limits,
                                         DecodeMode mode,
                                         const std::vector<Bytes>& excluded = {},
                                         HarvestStats* stats = nullptr);

// Queue inputs of `report`, excluding its crashes and hangs.
std::vector<TestCasePair> HarvestCampaign(target::Target& plain,
                                          const fuzzer::FuzzReport& report,
                                          const HarvestLimits& limits,
                                          DecodeMode mode,
                                          HarvestStats* stats = nullptr);

nlohmann::ordered_json PairToJson(std::string_view program_id,
                                  const TestCasePair& pair);
TestCasePair PairFromJson(const nlohmann::json& j);

// testcases.jsonl: one PairToJson record per line.
void WriteTestcases(const std::filesystem::path& path, std::string_view program_id,
                    const std::vector<TestCasePair>& pairs);
std::vector<TestCasePair> ReadTestcases(const std::filesystem::path& path);

}  // namespace fuzztune::harvest

#endif  // FUZZTUNE_HARVEST_HARVEST_H_
