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

#ifndef FUZZTUNE_FUZZER_MUTATOR_H_
#define FUZZTUNE_FUZZER_MUTATOR_H_

#include <array>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "fuzztune/common/bytes.h"
#include "fuzztune/common/rng.h"

namespace fuzztune::fuzzer {

enum class Stage { kSeed, kBitflip, kArith, kInterest, kHavoc, kSplice };

std::string_view StageName(Stage stage);
Stage ParseStage(std::string_view name);

inline constexpr int kArithMax = 35;
inline constexpr int kHavocMaxStack = 64;

// Substituted as one byte when the value fits in 8 bits (signed or
// unsigned), otherwise as a 16-bit word in both byte orders.
inline constexpr std::array<std::int32_t, 20> kInterestingValues = {
    -128, -1,  0,   1,    16,   32,   64,   100,  127,   128,
    255,  256, 512, 1000, 1024, 4096, 32767, 65535, -129, -32768};

// Receives each variant; returning false stops the enumeration.
using VariantVisitor = std::function<bool(ByteView)>;

class Mutator {
 public:
  explicit Mutator(size_t max_input_len) : max_len_(max_input_len) {}

  // Walking bit flips of `width` adjacent bits (1, 2 or 4), one variant per
  // starting bit position.
  void ForEachBitflip(ByteView input, int width, const VariantVisitor& visit) const;
  // Every byte plus and minus 1..kArithMax (wrapping).
  void ForEachArith(ByteView input, const VariantVisitor& visit) const;
  // Every position overwritten with every entry of kInterestingValues.
  // Variants identical to the input are skipped.
  void ForEachInterest(ByteView input, const VariantVisitor& visit) const;

  // Runs one deterministic stage (kBitflip covers widths 1, 2 and 4).
  void ForEachVariant(Stage stage, ByteView input, const VariantVisitor& visit) const;
  std::vector<Bytes> Variants(Stage stage, ByteView input) const;

  // 1..64 stacked random edits: bit flip, byte set (random or interesting),
  // word set, byte arithmetic, block delete, block clone, block insert.
  Bytes Havoc(ByteView input, Rng& rng) const;

  // Prefix of `head` joined to a suffix of `tail`, each cut at a random
  // offset (nonempty parts whenever the inputs allow it).
  Bytes Splice(ByteView head, ByteView tail, Rng& rng) const;

  size_t max_input_len() const { return max_len_; }

 private:
  size_t max_len_;
};

}  // namespace fuzztune::fuzzer

#endif  // FUZZTUNE_FUZZER_MUTATOR_H_
