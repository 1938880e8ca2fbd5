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

#ifndef FUZZTUNE_COMMON_RATIONAL_H_
#define FUZZTUNE_COMMON_RATIONAL_H_

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fuzztune {

// Exact nonnegative-or-negative fraction in lowest terms, den > 0.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  // Accepts "3", "3/4", "0.25", "16%".
  static Rational Parse(std::string_view text);

  // Parses "64:16:24" (weights normalized by their sum) or a comma list of
  // fractions "0.5,0.25,0.25".
  static std::vector<Rational> ParseFractions(std::string_view text);

  std::string ToString() const;
  double ToDouble() const { return static_cast<double>(num_) / den_; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

  // floor(n * this), exact.
  std::int64_t FloorTimes(std::int64_t n) const;
  // n * this rounded half up, exact.
  std::int64_t RoundTimes(std::int64_t n) const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Largest-remainder apportionment of n items over the given fractions
// (which must sum to 1). Ties go to the earlier slot.
std::vector<std::int64_t> Apportion(std::int64_t n,
                                    const std::vector<Rational>& fractions);

}  // namespace fuzztune

#endif  // FUZZTUNE_COMMON_RATIONAL_H_
