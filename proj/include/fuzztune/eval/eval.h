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

#ifndef FUZZTUNE_EVAL_EVAL_H_
#define FUZZTUNE_EVAL_EVAL_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace fuzztune::eval {

struct EmbeddingTable {
  std::vector<std::string> ids;
  std::vector<std::string> labels;  // problem ids
  std::vector<std::vector<double>> vectors;

  size_t size() const { return ids.size(); }
  size_t dim() const { return vectors.empty() ? 0 : vectors.front().size(); }

  // Equal lengths, unique ids, one dimension >= 1, finite components.
  // Throws PreconditionError.
  void Validate() const;
};

// The rows whose id is in `keep`, in table order.
EmbeddingTable Restrict(const EmbeddingTable& table, const std::vector<std::string>& keep);

// "<n> <dim>" then "id\tlabel\tv1 v2 ... v_dim" per row.
EmbeddingTable ReadEmbeddings(const std::filesystem::path& path);
void WriteEmbeddings(const std::filesystem::path& path, const EmbeddingTable& table);

enum class Similarity { kCosine, kDot };

std::string_view SimilarityName(Similarity s);
Similarity ParseSimilarity(std::string_view name);

struct ProblemScore {
  double map_at_r = 0;
  size_t n_queries = 0;
};

struct EvalReport {
  double map_at_r = 0;  // mean over queries
  size_t n_queries = 0;
  std::map<std::string, ProblemScore> per_problem;
  Similarity similarity = Similarity::kCosine;
};

// Every row queries all the others. R = class size - 1; candidates ranked by
// similarity, descending, ties by ascending id. A zero vector has cosine 0
// to everything. Throws PreconditionError naming any singleton class.
EvalReport MapAtR(const EmbeddingTable& table, Similarity similarity = Similarity::kCosine,
                  unsigned threads = 1);

// Fraction of positions where the two differ. Throws PreconditionError on
// empty or unequal inputs.
double ErrorRate(const std::vector<std::string>& predictions,
                 const std::vector<std::string>& truth);

nlohmann::ordered_json ReportToJson(const EvalReport& report);

// "problem_id,map_at_r,n_queries", one row per problem in id order.
std::string PerProblemCsv(const EvalReport& report);
// {"problem_id": [...], "map_at_r": [...], "n_queries": [...]}.
nlohmann::ordered_json PerProblemSeries(const EvalReport& report);

struct Predictions {
  std::vector<std::string> ids;
  std::vector<std::string> predictions;
  std::vector<std::string> labels;
};

// CSV with header "id,prediction,label"; fields may be double-quoted.
Predictions ReadPredictions(const std::filesystem::path& path);
void WritePredictions(const std::filesystem::path& path, const Predictions& p);

}  // namespace fuzztune::eval

#endif  // FUZZTUNE_EVAL_EVAL_H_
