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

#include "fuzztune/fuzzer/mutator.h"

#include <algorithm>
#include <bitset>
#include <set>

#include "fuzztune/common/errors.h"

namespace fuzztune::fuzzer {
namespace {

constexpr size_t kMaxBlock = 32;
constexpr size_t kMaxInsert = 16;

bool FitsByte(std::int32_t v) { return v >= -128 && v <= 255; }

enum HavocOp {
  kFlipBit,
  kSetRandomByte,
  kSetInterestingByte,
  kSetInterestingWord,
  kArithByte,
  kDeleteBlock,
  kCloneBlock,
  kInsertBlock,
  kNumHavocOps
};

}  // namespace

std::string_view StageName(Stage stage) {
  switch (stage) {
    case Stage::kSeed: return "seed";
    case Stage::kBitflip: return "bitflip";
    case Stage::kArith: return "arith";
    case Stage::kInterest: return "interest";
    case Stage::kHavoc: return "havoc";
    case Stage::kSplice: return "splice";
  }
  return "seed";
}

Stage ParseStage(std::string_view name) {
  for (Stage s : {Stage::kSeed, Stage::kBitflip, Stage::kArith,
                  Stage::kInterest, Stage::kHavoc, Stage::kSplice}) {
    if (StageName(s) == name) return s;
  }
  throw PreconditionError("unknown stage '" + std::string(name) + "'");
}

void Mutator::ForEachBitflip(ByteView input, int width,
                             const VariantVisitor& visit) const {
  if (width != 1 && width != 2 && width != 4) {
    throw PreconditionError("bitflip width must be 1, 2 or 4");
  }
  const size_t bits = input.size() * 8;
  if (bits < static_cast<size_t>(width)) return;
  Bytes buf(input.begin(), input.end());
  for (size_t start = 0; start + width <= bits; ++start) {
    for (int k = 0; k < width; ++k) {
      size_t bit = start + k;
      buf[bit >> 3] ^= static_cast<std::uint8_t>(0x80u >> (bit & 7));
    }
    bool go_on = visit(buf);
    for (int k = 0; k < width; ++k) {
      size_t bit = start + k;
      buf[bit >> 3] ^= static_cast<std::uint8_t>(0x80u >> (bit & 7));
    }
    if (!go_on) return;
  }
}

void Mutator::ForEachArith(ByteView input, const VariantVisitor& visit) const {
  Bytes buf(input.begin(), input.end());
  for (size_t i = 0; i < buf.size(); ++i) {
    const std::uint8_t orig = buf[i];
    for (int delta = 1; delta <= kArithMax; ++delta) {
      for (int sign : {1, -1}) {
        buf[i] = static_cast<std::uint8_t>(orig + sign * delta);
        if (!visit(buf)) {
          buf[i] = orig;
          return;
        }
      }
    }
    buf[i] = orig;
  }
}

void Mutator::ForEachInterest(ByteView input, const VariantVisitor& visit) const {
  Bytes buf(input.begin(), input.end());
  for (size_t i = 0; i < buf.size(); ++i) {
    std::bitset<256> bytes_done;
    std::set<std::pair<std::uint8_t, std::uint8_t>> words_done;
    for (std::int32_t v : kInterestingValues) {
      if (FitsByte(v)) {
        auto b = static_cast<std::uint8_t>(v);
        if (b == input[i] || bytes_done.test(b)) continue;
        bytes_done.set(b);
        buf[i] = b;
        bool go_on = visit(buf);
        buf[i] = input[i];
        if (!go_on) return;
        continue;
      }
      if (i + 1 >= buf.size()) continue;
      auto w = static_cast<std::uint16_t>(v);
      const std::pair<std::uint8_t, std::uint8_t> orders[2] = {
          {static_cast<std::uint8_t>(w & 0xFF), static_cast<std::uint8_t>(w >> 8)},
          {static_cast<std::uint8_t>(w >> 8), static_cast<std::uint8_t>(w & 0xFF)}};
      for (const auto& pair : orders) {
        if ((pair.first == input[i] && pair.second == input[i + 1]) ||
            !words_done.insert(pair).second) {
          continue;
        }
        buf[i] = pair.first;
        buf[i + 1] = pair.second;
        bool go_on = visit(buf);
        buf[i] = input[i];
        buf[i + 1] = input[i + 1];
        if (!go_on) return;
      }
    }
  }
}

void Mutator::ForEachVariant(Stage stage, ByteView input,
                             const VariantVisitor& visit) const {
  switch (stage) {
    case Stage::kBitflip: {
      bool stopped = false;
      auto guard = [&](ByteView v) {
        if (!visit(v)) {
          stopped = true;
          return false;
        }
        return true;
      };
      for (int width : {1, 2, 4}) {
        ForEachBitflip(input, width, guard);
        if (stopped) return;
      }
      return;
    }
    case Stage::kArith:
      ForEachArith(input, visit);
      return;
    case Stage::kInterest:
      ForEachInterest(input, visit);
      return;
    default:
      throw PreconditionError("stage '" + std::string(StageName(stage)) +
                              "' is not deterministic");
  }
}

std::vector<Bytes> Mutator::Variants(Stage stage, ByteView input) const {
  std::vector<Bytes> out;
  ForEachVariant(stage, input, [&](ByteView v) {
    out.emplace_back(v.begin(), v.end());
    return true;
  });
  return out;
}

Bytes Mutator::Havoc(ByteView input, Rng& rng) const {
  Bytes buf(input.begin(), input.end());
  if (buf.size() > max_len_) buf.resize(max_len_);
  const int stack = 1 << rng.Below(7);  // 1..64
  for (int n = 0; n < stack; ++n) {
    auto op = static_cast<HavocOp>(rng.Below(kNumHavocOps));
    if (buf.empty()) op = kInsertBlock;
    switch (op) {
      case kFlipBit: {
        size_t bit = rng.Below(buf.size() * 8);
        buf[bit >> 3] ^= static_cast<std::uint8_t>(0x80u >> (bit & 7));
        break;
      }
      case kSetRandomByte:
        buf[rng.Below(buf.size())] = static_cast<std::uint8_t>(rng());
        break;
      case kSetInterestingByte: {
        std::int32_t v;
        do {
          v = kInterestingValues[rng.Below(kInterestingValues.size())];
        } while (!FitsByte(v));
        buf[rng.Below(buf.size())] = static_cast<std::uint8_t>(v);
        break;
      }
      case kSetInterestingWord: {
        if (buf.size() < 2) break;
        auto w = static_cast<std::uint16_t>(
            kInterestingValues[rng.Below(kInterestingValues.size())]);
        size_t pos = rng.Below(buf.size() - 1);
        bool big_endian = rng.Chance(1, 2);
        buf[pos] = static_cast<std::uint8_t>(big_endian ? w >> 8 : w & 0xFF);
        buf[pos + 1] = static_cast<std::uint8_t>(big_endian ? w & 0xFF : w >> 8);
        break;
      }
      case kArithByte: {
        size_t pos = rng.Below(buf.size());
        int delta = 1 + static_cast<int>(rng.Below(kArithMax));
        buf[pos] = static_cast<std::uint8_t>(
            rng.Chance(1, 2) ? buf[pos] + delta : buf[pos] - delta);
        break;
      }
      case kDeleteBlock: {
        if (buf.size() < 2) break;
        size_t len = 1 + rng.Below(std::min(kMaxBlock, buf.size() - 1));
        size_t pos = rng.Below(buf.size() - len + 1);
        buf.erase(buf.begin() + pos, buf.begin() + pos + len);
        break;
      }
      case kCloneBlock: {
        if (buf.size() >= max_len_) break;
        size_t len = 1 + rng.Below(std::min(kMaxBlock, buf.size()));
        len = std::min(len, max_len_ - buf.size());
        size_t from = rng.Below(buf.size() - len + 1);
        size_t to = rng.Below(buf.size() + 1);
        Bytes block(buf.begin() + from, buf.begin() + from + len);
        buf.insert(buf.begin() + to, block.begin(), block.end());
        break;
      }
      case kInsertBlock: {
        if (buf.size() >= max_len_) break;
        size_t len = 1 + rng.Below(kMaxInsert);
        len = std::min(len, max_len_ - buf.size());
        Bytes block(len);
        if (rng.Chance(1, 2)) {
          for (auto& b : block) b = static_cast<std::uint8_t>(rng());
        } else {
          std::fill(block.begin(), block.end(), static_cast<std::uint8_t>(rng()));
        }
        size_t to = rng.Below(buf.size() + 1);
        buf.insert(buf.begin() + to, block.begin(), block.end());
        break;
      }
      case kNumHavocOps:
        break;
    }
  }
  return buf;
}

Bytes Mutator::Splice(ByteView head, ByteView tail, Rng& rng) const {
  size_t cut_head = head.size() >= 2 ? 1 + rng.Below(head.size() - 1) : head.size();
  size_t cut_tail = tail.size() >= 2 ? 1 + rng.Below(tail.size() - 1) : 0;
  Bytes out(head.begin(), head.begin() + cut_head);
  out.insert(out.end(), tail.begin() + cut_tail, tail.end());
  if (out.size() > max_len_) out.resize(max_len_);
  return out;
}

}  // namespace fuzztune::fuzzer
