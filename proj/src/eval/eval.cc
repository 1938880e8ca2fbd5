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

#include "fuzztune/eval/eval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <thread>
#include <unordered_map>

#include "fuzztune/common/errors.h"
#include "fuzztune/common/fs_util.h"

namespace fuzztune::eval {
namespace {

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

[[noreturn]] void Malformed(const std::filesystem::path& path, size_t line,
                            const std::string& what) {
  throw PreconditionError(path.string() + ":" + std::to_string(line) + ": " + what);
}

template <typename T>
bool ParseNumber(std::string_view s, T& out) {
  auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

std::vector<std::string_view> Fields(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (true) {
    size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Splits one CSV record; returns false on an unterminated quote.
bool CsvFields(std::string_view line, std::vector<std::string>& out) {
  out.clear();
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) return false;
  out.push_back(std::move(cur));
  return true;
}

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

void EmbeddingTable::Validate() const {
  if (labels.size() != ids.size() || vectors.size() != ids.size()) {
    throw PreconditionError("embedding table columns have unequal lengths");
  }
  std::set<std::string_view> seen;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (!seen.insert(ids[i]).second) {
      throw PreconditionError("duplicate embedding id '" + ids[i] + "'");
    }
    if (vectors[i].empty() || vectors[i].size() != vectors[0].size()) {
      throw PreconditionError("embedding '" + ids[i] + "' has dimension " +
                              std::to_string(vectors[i].size()) + ", expected " +
                              std::to_string(std::max<size_t>(1, vectors[0].size())));
    }
    for (double v : vectors[i]) {
      if (!std::isfinite(v)) {
        throw PreconditionError("embedding '" + ids[i] + "' has a non-finite component");
      }
    }
  }
}

EmbeddingTable Restrict(const EmbeddingTable& table, const std::vector<std::string>& keep) {
  std::set<std::string_view> wanted(keep.begin(), keep.end());
  EmbeddingTable out;
  for (size_t i = 0; i < table.size(); ++i) {
    if (!wanted.count(table.ids[i])) continue;
    out.ids.push_back(table.ids[i]);
    out.labels.push_back(table.labels[i]);
    out.vectors.push_back(table.vectors[i]);
  }
  return out;
}

EmbeddingTable ReadEmbeddings(const std::filesystem::path& path) {
  std::string text = ReadFileText(path);
  auto lines = SplitLines(text);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) Malformed(path, 1, "missing '<n> <dim>' header");
  auto head = Fields(lines[0], ' ');
  size_t n = 0, dim = 0;
  if (head.size() != 2 || !ParseNumber(head[0], n) || !ParseNumber(head[1], dim) ||
      dim == 0) {
    Malformed(path, 1, "header must be '<n> <dim>' with dim >= 1");
  }
  if (lines.size() - 1 != n) {
    Malformed(path, 1, "header announces " + std::to_string(n) + " rows, file has " +
                           std::to_string(lines.size() - 1));
  }
  EmbeddingTable t;
  for (size_t i = 1; i < lines.size(); ++i) {
    auto cols = Fields(lines[i], '\t');
    if (cols.size() != 3) Malformed(path, i + 1, "expected id<TAB>label<TAB>vector");
    std::vector<double> v;
    for (auto f : Fields(cols[2], ' ')) {
      if (f.empty()) continue;
      double x;
      if (!ParseNumber(f, x)) Malformed(path, i + 1, "bad number '" + std::string(f) + "'");
      v.push_back(x);
    }
    if (v.size() != dim) {
      Malformed(path, i + 1, "vector has " + std::to_string(v.size()) +
                                 " components, header says " + std::to_string(dim));
    }
    t.ids.emplace_back(cols[0]);
    t.labels.emplace_back(cols[1]);
    t.vectors.push_back(std::move(v));
  }
  t.Validate();
  return t;
}

void WriteEmbeddings(const std::filesystem::path& path, const EmbeddingTable& table) {
  table.Validate();
  std::string out = std::to_string(table.size()) + " " + std::to_string(table.dim()) + "\n";
  char buf[32];
  for (size_t i = 0; i < table.size(); ++i) {
    out += table.ids[i] + "\t" + table.labels[i] + "\t";
    for (size_t k = 0; k < table.vectors[i].size(); ++k) {
      if (k) out.push_back(' ');
      std::snprintf(buf, sizeof(buf), "%.17g", table.vectors[i][k]);
      out += buf;
    }
    out.push_back('\n');
  }
  WriteFileAtomic(path, std::string_view(out));
}

std::string_view SimilarityName(Similarity s) {
  return s == Similarity::kDot ? "dot" : "cosine";
}

Similarity ParseSimilarity(std::string_view name) {
  if (name == "cosine") return Similarity::kCosine;
  if (name == "dot") return Similarity::kDot;
  throw PreconditionError("unknown similarity '" + std::string(name) +
                          "' (expected cosine or dot)");
}

EvalReport MapAtR(const EmbeddingTable& table, Similarity similarity, unsigned threads) {
  table.Validate();
  const size_t n = table.size();
  if (n == 0) throw PreconditionError("embedding table is empty");
  std::unordered_map<std::string, size_t> class_size;
  for (const auto& l : table.labels) ++class_size[l];
  for (const auto& [label, count] : class_size) {
    if (count < 2) {
      throw PreconditionError("class '" + label + "' has a single member; MAP@R needs >= 2");
    }
  }
  std::vector<double> norm(n);
  for (size_t i = 0; i < n; ++i) norm[i] = std::sqrt(Dot(table.vectors[i], table.vectors[i]));

  // Candidate order for ties: ascending id.
  std::vector<size_t> by_id(n);
  std::iota(by_id.begin(), by_id.end(), size_t{0});
  std::sort(by_id.begin(), by_id.end(),
            [&](size_t a, size_t b) { return table.ids[a] < table.ids[b]; });
  std::vector<size_t> id_rank(n);
  for (size_t r = 0; r < n; ++r) id_rank[by_id[r]] = r;

  std::vector<double> ap(n);
  auto run = [&](size_t begin, size_t end) {
    std::vector<double> sim(n);
    std::vector<size_t> order;
    order.reserve(n);
    for (size_t q = begin; q < end; ++q) {
      order.clear();
      for (size_t j = 0; j < n; ++j) {
        if (j == q) continue;
        double d = Dot(table.vectors[q], table.vectors[j]);
        if (similarity == Similarity::kCosine) {
          d = (norm[q] == 0 || norm[j] == 0) ? 0.0 : d / (norm[q] * norm[j]);
        }
        sim[j] = d;
        order.push_back(j);
      }
      const size_t r = class_size.at(table.labels[q]) - 1;
      std::partial_sort(order.begin(), order.begin() + r, order.end(),
                        [&](size_t a, size_t b) {
                          if (sim[a] != sim[b]) return sim[a] > sim[b];
                          return id_rank[a] < id_rank[b];
                        });
      double sum = 0;
      size_t hits = 0;
      for (size_t k = 0; k < r; ++k) {
        if (table.labels[order[k]] != table.labels[q]) continue;
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(k + 1);
      }
      ap[q] = sum / static_cast<double>(r);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    run(0, n);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back(run, n * t / threads, n * (t + 1) / threads);
    }
    for (auto& th : pool) th.join();
  }

  EvalReport report;
  report.similarity = similarity;
  report.n_queries = n;
  std::map<std::string, double> sums;
  double total = 0;
  for (size_t q = 0; q < n; ++q) {
    total += ap[q];
    sums[table.labels[q]] += ap[q];
    ++report.per_problem[table.labels[q]].n_queries;
  }
  report.map_at_r = total / static_cast<double>(n);
  for (auto& [label, score] : report.per_problem) {
    score.map_at_r = sums[label] / static_cast<double>(score.n_queries);
  }
  return report;
}

double ErrorRate(const std::vector<std::string>& predictions,
                 const std::vector<std::string>& truth) {
  if (predictions.size() != truth.size()) {
    throw PreconditionError("error rate over " + std::to_string(predictions.size()) +
                            " predictions and " + std::to_string(truth.size()) + " labels");
  }
  if (truth.empty()) throw PreconditionError("error rate over zero predictions");
  size_t wrong = 0;
  for (size_t i = 0; i < truth.size(); ++i) wrong += predictions[i] != truth[i];
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

nlohmann::ordered_json ReportToJson(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["map_at_r"] = report.map_at_r;
  j["n_queries"] = report.n_queries;
  j["similarity"] = SimilarityName(report.similarity);
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& [label, s] : report.per_problem) {
    per[label] = {{"map_at_r", s.map_at_r}, {"n_queries", s.n_queries}};
  }
  j["per_problem"] = per;
  return j;
}

std::string PerProblemCsv(const EvalReport& report) {
  std::string out = "problem_id,map_at_r,n_queries\n";
  char buf[32];
  for (const auto& [label, s] : report.per_problem) {
    std::snprintf(buf, sizeof(buf), "%.17g", s.map_at_r);
    out += CsvField(label) + "," + buf + "," + std::to_string(s.n_queries) + "\n";
  }
  return out;
}

nlohmann::ordered_json PerProblemSeries(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["problem_id"] = nlohmann::ordered_json::array();
  j["map_at_r"] = nlohmann::ordered_json::array();
  j["n_queries"] = nlohmann::ordered_json::array();
  for (const auto& [label, s] : report.per_problem) {
    j["problem_id"].push_back(label);
    j["map_at_r"].push_back(s.map_at_r);
    j["n_queries"].push_back(s.n_queries);
  }
  return j;
}

Predictions ReadPredictions(const std::filesystem::path& path) {
  std::string text = ReadFileText(path);
  auto lines = SplitLines(text);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  std::vector<std::string> f;
  if (lines.empty() || !CsvFields(lines[0], f) ||
      f != std::vector<std::string>{"id", "prediction", "label"}) {
    Malformed(path, 1, "header must be 'id,prediction,label'");
  }
  Predictions p;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (!CsvFields(lines[i], f) || f.size() != 3) {
      Malformed(path, i + 1, "expected three fields");
    }
    p.ids.push_back(std::move(f[0]));
    p.predictions.push_back(std::move(f[1]));
    p.labels.push_back(std::move(f[2]));
  }
  return p;
}

void WritePredictions(const std::filesystem::path& path, const Predictions& p) {
  if (p.predictions.size() != p.ids.size() || p.labels.size() != p.ids.size()) {
    throw PreconditionError("prediction columns have unequal lengths");
  }
  std::string out = "id,prediction,label\n";
  for (size_t i = 0; i < p.ids.size(); ++i) {
    out += CsvField(p.ids[i]) + "," + CsvField(p.predictions[i]) + "," +
           CsvField(p.labels[i]) + "\n";
  }
  WriteFileAtomic(path, std::string_view(out));
}

}  // namespace fuzztune::eval
