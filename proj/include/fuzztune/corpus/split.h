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

#ifndef FUZZTUNE_CORPUS_SPLIT_H_
#define FUZZTUNE_CORPUS_SPLIT_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fuzztune/common/rational.h"
#include "fuzztune/corpus/corpus.h"
#include "json.hpp"

namespace fuzztune::corpus {

enum class Task { kCloneDetection, kClassification };
enum class SplitUnit { kProblems, kPrograms };

std::string_view TaskName(Task task);
Task ParseTask(std::string_view name);
std::string_view SplitUnitName(SplitUnit unit);
SplitUnit ParseSplitUnit(std::string_view name);

struct SplitSpec {
  Task task = Task::kCloneDetection;
  SplitUnit unit = SplitUnit::kProblems;
  std::array<Rational, 3> fractions{Rational(64, 104), Rational(16, 104),
                                    Rational(24, 104)};
  std::uint64_t seed = 0;

  // Fractions strictly positive and summing to exactly 1; clone detection
  // requires problem-level splitting. Throws PreconditionError.
  void Validate() const;

  // Clone detection 64:16:24 over problems; classification 60:20:20 over
  // programs (POJ-104 default); CodeNet classification 50:25:25.
  static SplitSpec Default(Task task, std::string_view layout);
};

struct Splits {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;

  friend bool operator==(const Splits&, const Splits&) = default;
  // "train" | "val" | "test" | "" (not in any split).
  std::string_view TagOf(std::string_view program_id) const;
};

// Problem directories are sorted before the seeded shuffle, so the result
// is a pure function of (corpus, spec). Split sizes use largest-remainder
// apportionment; any empty split is an error.
Splits Split(const Corpus& corpus, const SplitSpec& spec);

// Shrinks train/val, leaving test untouched.
//  kProblems: keeps round(ratio * n) problems of train and of val.
//  kPrograms: keeps round(ratio * |train+val|) programs divided 4:1 between
//             train and val. ratio == 1 is the identity.
// Throws PreconditionError when the ratio is out of (0, 1] or train would
// end up empty.
Splits Subsample(const Corpus& corpus, const Splits& splits, Rational ratio,
                 SplitUnit unit, std::uint64_t seed);

nlohmann::ordered_json SplitsToJson(const Splits& splits, const SplitSpec& spec);
Splits SplitsFromJson(const nlohmann::ordered_json& j);

}  // namespace fuzztune::corpus

#endif  // FUZZTUNE_CORPUS_SPLIT_H_
