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

#include "fuzztune/fuzzer/coverage_map.h"

#include <algorithm>
#include <bit>
#include <cstring>

namespace fuzztune::fuzzer {
namespace {

constexpr std::array<std::uint8_t, 256> MakeBucketBits() {
  std::array<std::uint8_t, 256> t{};
  for (int c = 1; c < 256; ++c) {
    int b = c == 1 ? 0 : c == 2 ? 1 : c == 3 ? 2 : c <= 7 ? 3 : c <= 15 ? 4
          : c <= 31 ? 5 : c <= 127 ? 6 : 7;
    t[c] = static_cast<std::uint8_t>(1u << b);
  }
  return t;
}

constexpr auto kBucketBits = MakeBucketBits();

std::uint64_t LoadWord(const std::uint8_t* p) {
  std::uint64_t w;
  std::memcpy(&w, p, sizeof(w));
  return w;
}

}  // namespace

std::optional<int> Bucket(std::uint8_t count) {
  if (count == 0) return std::nullopt;
  return std::countr_zero(kBucketBits[count]);
}

std::string_view BucketLabel(int bucket) {
  static constexpr std::string_view kLabels[kNumBuckets] = {
      "1", "2", "3", "4-7", "8-15", "16-31", "32-127", "128+"};
  return kLabels[bucket];
}

std::uint8_t BucketBit(std::uint8_t count) { return kBucketBits[count]; }

Signature IntersectSignatures(const std::vector<Signature>& runs) {
  if (runs.empty()) return {};
  Signature acc = runs.front();
  for (size_t i = 1; i < runs.size(); ++i) {
    Signature next;
    std::set_intersection(acc.begin(), acc.end(), runs[i].begin(),
                          runs[i].end(), std::back_inserter(next));
    acc.swap(next);
  }
  return acc;
}

void CoverageMap::Clear() { std::memset(counters_.data(), 0, kMapSize); }

void CoverageMap::Hit(std::uint32_t edge, std::uint32_t times) {
  std::uint8_t& c = counters_[edge & (kMapSize - 1)];
  std::uint32_t v = c + times;
  c = static_cast<std::uint8_t>(v > 255 ? 255 : v);
}

bool CoverageMap::Empty() const {
  for (size_t i = 0; i < kMapSize; i += 8) {
    if (LoadWord(counters_.data() + i)) return false;
  }
  return true;
}

size_t CoverageMap::CountEdges() const {
  size_t n = 0;
  for (size_t i = 0; i < kMapSize; i += 8) {
    if (!LoadWord(counters_.data() + i)) continue;
    for (size_t j = i; j < i + 8; ++j) n += counters_[j] != 0;
  }
  return n;
}

Signature CoverageMap::ToSignature() const {
  Signature sig;
  for (size_t i = 0; i < kMapSize; i += 8) {
    if (!LoadWord(counters_.data() + i)) continue;
    for (size_t j = i; j < i + 8; ++j) {
      if (auto b = Bucket(counters_[j])) {
        sig.push_back({static_cast<std::uint16_t>(j),
                       static_cast<std::uint8_t>(*b)});
      }
    }
  }
  return sig;
}

bool CoverageAccumulator::HasNew(const CoverageMap& cov) const {
  const std::uint8_t* c = cov.data();
  for (size_t i = 0; i < kMapSize; i += 8) {
    if (!LoadWord(c + i)) continue;
    for (size_t j = i; j < i + 8; ++j) {
      if (kBucketBits[c[j]] & ~seen_[j]) return true;
    }
  }
  return false;
}

bool CoverageAccumulator::HasNew(const Signature& sig) const {
  for (const auto& e : sig) {
    if (!(seen_[e.edge] & (1u << e.bucket))) return true;
  }
  return false;
}

bool CoverageAccumulator::Contains(const Signature& sig) const {
  return !HasNew(sig);
}

void CoverageAccumulator::MergeByte(size_t edge, std::uint8_t bits) {
  const std::uint8_t old = seen_[edge];
  const std::uint8_t added = bits & static_cast<std::uint8_t>(~old);
  if (!added) return;
  if (!old) ++edges_;
  pairs_ += static_cast<size_t>(std::popcount(added));
  seen_[edge] = old | added;
}

void CoverageAccumulator::Merge(const Signature& sig) {
  for (const auto& e : sig) MergeByte(e.edge, static_cast<std::uint8_t>(1u << e.bucket));
}

void CoverageAccumulator::Merge(const CoverageMap& cov) {
  const std::uint8_t* c = cov.data();
  for (size_t i = 0; i < kMapSize; i += 8) {
    if (!LoadWord(c + i)) continue;
    for (size_t j = i; j < i + 8; ++j) {
      if (c[j]) MergeByte(j, kBucketBits[c[j]]);
    }
  }
}

Signature CoverageAccumulator::Pairs() const {
  Signature out;
  for (size_t w = 0; w < kMapSize; w += 8) {
    if (!LoadWord(seen_.data() + w)) continue;
    for (size_t i = w; i < w + 8; ++i) {
      for (int b = 0; b < kNumBuckets; ++b) {
        if (seen_[i] & (1u << b)) {
          out.push_back({static_cast<std::uint16_t>(i), static_cast<std::uint8_t>(b)});
        }
      }
    }
  }
  return out;
}

bool IsInteresting(CoverageAccumulator& global, const CoverageMap& cov) {
  if (!global.HasNew(cov)) return false;
  global.Merge(cov);
  return true;
}

}  // namespace fuzztune::fuzzer
