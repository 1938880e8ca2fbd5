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

#include "fuzztune/common/rational.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>

#include "fuzztune/common/errors.h"

namespace fuzztune {
namespace {

using Wide = __int128;

std::int64_t Narrow(Wide v) {
  if (v > INT64_MAX || v < INT64_MIN) throw Error("rational overflow");
  return static_cast<std::int64_t>(v);
}

Rational Make(Wide num, Wide den) {
  if (den == 0) throw Error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide a = num < 0 ? -num : num;
  Wide b = den;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(Narrow(num), Narrow(den));
}

std::int64_t ParseInt(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error("invalid number '" + std::string(s) + "'");
  }
  return v;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitOn(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  for (;;) {
    size_t pos = s.find(sep, start);
    out.push_back(Trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error("rational with zero denominator");
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

Rational Rational::Parse(std::string_view text) {
  text = Trim(text);
  if (text.empty()) throw Error("empty rational");
  if (text.back() == '%') {
    return Parse(text.substr(0, text.size() - 1)) * Rational(1, 100);
  }
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Make(ParseInt(Trim(text.substr(0, slash))),
                ParseInt(Trim(text.substr(slash + 1))));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (negative) whole.remove_prefix(1);
    if (frac.size() > 15) throw Error("too many decimal places");
    Wide den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    Wide num = (whole.empty() ? 0 : ParseInt(whole)) * den +
               (frac.empty() ? 0 : ParseInt(frac));
    return Make(negative ? -num : num, den);
  }
  return Rational(ParseInt(text));
}

std::vector<Rational> Rational::ParseFractions(std::string_view text) {
  std::vector<Rational> out;
  if (text.find(':') != std::string_view::npos) {
    std::vector<std::int64_t> weights;
    std::int64_t total = 0;
    for (auto part : SplitOn(text, ':')) {
      weights.push_back(ParseInt(part));
      total += weights.back();
    }
    if (total <= 0) throw Error("weights must sum to a positive value");
    for (auto w : weights) out.emplace_back(w, total);
    return out;
  }
  for (auto part : SplitOn(text, ',')) out.push_back(Parse(part));
  return out;
}

std::string Rational::ToString() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Make(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_,
              Wide(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Make(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_,
              Wide(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Make(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  Wide lhs = Wide(a.num_) * b.den_;
  Wide rhs = Wide(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::int64_t Rational::FloorTimes(std::int64_t n) const {
  Wide p = Wide(n) * num_;
  Wide q = p / den_;
  if (p % den_ != 0 && p < 0) --q;
  return Narrow(q);
}

std::int64_t Rational::RoundTimes(std::int64_t n) const {
  // floor(n*num/den + 1/2) = floor((2*n*num + den) / (2*den))
  Wide p = 2 * Wide(n) * num_ + den_;
  Wide d = 2 * Wide(den_);
  Wide q = p / d;
  if (p % d != 0 && p < 0) --q;
  return Narrow(q);
}

std::vector<std::int64_t> Apportion(std::int64_t n,
                                    const std::vector<Rational>& fractions) {
  std::vector<std::int64_t> counts;
  std::vector<std::pair<Rational, size_t>> remainders;
  std::int64_t assigned = 0;
  for (size_t i = 0; i < fractions.size(); ++i) {
    std::int64_t c = fractions[i].FloorTimes(n);
    counts.push_back(c);
    assigned += c;
    remainders.emplace_back(fractions[i] * Rational(n) - Rational(c), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (size_t k = 0; assigned < n && k < remainders.size(); ++k, ++assigned) {
    ++counts[remainders[k].second];
  }
  return counts;
}

}  // namespace fuzztune
