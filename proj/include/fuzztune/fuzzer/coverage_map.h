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

#ifndef FUZZTUNE_FUZZER_COVERAGE_MAP_H_
#define FUZZTUNE_FUZZER_COVERAGE_MAP_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fuzztune::fuzzer {

inline constexpr size_t kMapSize = size_t{1} << 16;
inline constexpr int kNumBuckets = 8;

// Hit-count buckets: {1}, {2}, {3}, {4-7}, {8-15}, {16-31}, {32-127},
// {128+}, numbered 0..7. A zero count has no bucket.
std::optional<int> Bucket(std::uint8_t count);
std::string_view BucketLabel(int bucket);

// One bit per bucket, so an edge's observed buckets fit in a byte.
std::uint8_t BucketBit(std::uint8_t count);

struct SignatureEntry {
  std::uint16_t edge;
  std::uint8_t bucket;
  friend bool operator==(const SignatureEntry&, const SignatureEntry&) = default;
  friend auto operator<=>(const SignatureEntry&, const SignatureEntry&) = default;
};

// The set of (edge, bucket) pairs of one execution, sorted by edge.
using Signature = std::vector<SignatureEntry>;

// Pairs present in every signature (the stable part of a flaky target).
Signature IntersectSignatures(const std::vector<Signature>& runs);

// Fixed array of 2^16 saturating 8-bit edge counters.
class CoverageMap {
 public:
  CoverageMap() : counters_(kMapSize, 0) {}

  std::uint8_t* data() { return counters_.data(); }
  const std::uint8_t* data() const { return counters_.data(); }
  std::span<const std::uint8_t> counters() const { return counters_; }
  std::uint8_t operator[](size_t i) const { return counters_[i]; }

  void Clear();
  void Hit(std::uint32_t edge, std::uint32_t times = 1);
  void Set(std::uint32_t edge, std::uint8_t count) {
    counters_[edge & (kMapSize - 1)] = count;
  }
  bool Empty() const;
  size_t CountEdges() const;
  Signature ToSignature() const;

  friend bool operator==(const CoverageMap&, const CoverageMap&) = default;

 private:
  std::vector<std::uint8_t> counters_;
};

// Campaign-wide record of every (edge, bucket) pair seen so far.
class CoverageAccumulator {
 public:
  CoverageAccumulator() : seen_(kMapSize, 0) {}

  // True iff `cov` holds a pair not yet recorded. Does not modify.
  bool HasNew(const CoverageMap& cov) const;
  bool HasNew(const Signature& sig) const;
  bool Contains(const Signature& sig) const;
  void Merge(const Signature& sig);
  void Merge(const CoverageMap& cov);

  size_t EdgesCovered() const { return edges_; }
  size_t PairsCovered() const { return pairs_; }
  // The recorded pairs, sorted.
  Signature Pairs() const;

 private:
  void MergeByte(size_t edge, std::uint8_t bits);

  std::vector<std::uint8_t> seen_;  // per edge: OR of BucketBit()s
  size_t edges_ = 0;
  size_t pairs_ = 0;
};

// Spec-level novelty check: true iff `cov` contributes an unseen
// (edge, bucket) pair, in which case `global` absorbs it.
bool IsInteresting(CoverageAccumulator& global, const CoverageMap& cov);

}  // namespace fuzztune::fuzzer

#endif  // FUZZTUNE_FUZZER_COVERAGE_MAP_H_
