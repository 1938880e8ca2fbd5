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

#ifndef FUZZTUNE_COMMON_RNG_H_
#define FUZZTUNE_COMMON_RNG_H_

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace fuzztune {

// splitmix64. Every random decision in the toolchain goes through this type
// so results are reproducible across standard libraries (std::shuffle and
// the std distributions are implementation-defined).
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng() = default;
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  // Uniform in [0, bound). bound must be nonzero.
  std::uint64_t Below(std::uint64_t bound) {
    // Rejection sampling on the top of the range keeps this unbiased.
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform in [lo, hi].
  std::uint64_t Between(std::uint64_t lo, std::uint64_t hi) {
    return lo + Below(hi - lo + 1);
  }

  // Uniform in [0, 1), 53 random bits.
  double Uniform() { return static_cast<double>((*this)() >> 11) * 0x1p-53; }

  bool Chance(std::uint64_t num, std::uint64_t den) { return Below(den) < num; }

  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[Below(i)]);
    }
  }

 private:
  std::uint64_t state_ = 0;
};

// Derives an independent stream seed from a base seed and a label
// (e.g. a program id), independent of processing order.
std::uint64_t DeriveSeed(std::uint64_t base, std::string_view label);

}  // namespace fuzztune

#endif  // FUZZTUNE_COMMON_RNG_H_
