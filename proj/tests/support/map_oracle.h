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

#ifndef FUZZTUNE_TESTS_SUPPORT_MAP_ORACLE_H_
#define FUZZTUNE_TESTS_SUPPORT_MAP_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fuzztune/common/rng.h"
#include "fuzztune/eval/eval.h"

namespace fuzztune::testing {

inline double OracleSim(const std::vector<double>& a, const std::vector<double>& b,
                        eval::Similarity s) {
  double d = 0, na = 0, nb = 0;
  for (size_t i = 0; i < a.size(); ++i) d += a[i] * b[i];
  if (s == eval::Similarity::kDot) return d;
  for (size_t i = 0; i < a.size(); ++i) na += a[i] * a[i];
  for (size_t i = 0; i < b.size(); ++i) nb += b[i] * b[i];
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  if (na == 0 || nb == 0) return 0;
  return d / (na * nb);
}

// Rank of each candidate = number of candidates strictly ahead of it; the
// average precision is then summed over relevant candidates ranked < R.
inline double OracleMap(const eval::EmbeddingTable& t, eval::Similarity s,
                        std::map<std::string, std::pair<double, int>>* per = nullptr) {
  const size_t n = t.size();
  double total = 0;
  for (size_t q = 0; q < n; ++q) {
    size_t r = 0;
    for (size_t j = 0; j < n; ++j) r += j != q && t.labels[j] == t.labels[q];
    std::vector<double> sim(n);
    for (size_t j = 0; j < n; ++j) sim[j] = OracleSim(t.vectors[q], t.vectors[j], s);
    auto ahead = [&](size_t c, size_t j) {
      return sim[c] > sim[j] || (sim[c] == sim[j] && t.ids[c] < t.ids[j]);
    };
    std::vector<size_t> rank(n, 0);
    for (size_t j = 0; j < n; ++j) {
      if (j == q) continue;
      for (size_t c = 0; c < n; ++c) rank[j] += c != q && c != j && ahead(c, j);
    }
    double ap = 0;
    for (size_t j = 0; j < n; ++j) {
      if (j == q || t.labels[j] != t.labels[q] || rank[j] >= r) continue;
      size_t rel_upto = 0;
      for (size_t c = 0; c < n; ++c) {
        rel_upto += c != q && t.labels[c] == t.labels[q] && rank[c] <= rank[j];
      }
      ap += static_cast<double>(rel_upto) / static_cast<double>(rank[j] + 1);
    }
    ap /= static_cast<double>(r);
    total += ap;
    if (per) {
      (*per)[t.labels[q]].first += ap;
      (*per)[t.labels[q]].second += 1;
    }
  }
  return total / static_cast<double>(n);
}

inline eval::EmbeddingTable RandomTable(Rng& rng, bool integer_valued) {
  eval::EmbeddingTable t;
  size_t n = 2 + rng.Below(29);
  size_t dim = 1 + rng.Below(8);
  size_t classes = 1 + rng.Below(std::max<size_t>(1, n / 2));
  std::vector<std::string> labels;
  // Every class gets at least two members.
  for (size_t i = 0; i < n; ++i) {
    size_t c = i < 2 * classes ? i / 2 : rng.Below(classes);
    labels.push_back("c" + std::to_string(c));
  }
  for (size_t i = 0; i < n; ++i) {
    size_t k = rng.Below(n - i) + i;
    std::swap(labels[i], labels[k]);
  }
  for (size_t i = 0; i < n; ++i) {
    t.ids.push_back("id" + std::to_string(rng.Below(1000000)) + "_" + std::to_string(i));
    t.labels.push_back(labels[i]);
    std::vector<double> v(dim);
    for (auto& x : v) {
      x = integer_valued ? static_cast<double>(static_cast<int>(rng.Below(3)) - 1)
                         : rng.Uniform() * 2 - 1;
    }
    t.vectors.push_back(v);
  }
  return t;
}

}  // namespace fuzztune::testing

#endif  // FUZZTUNE_TESTS_SUPPORT_MAP_ORACLE_H_
