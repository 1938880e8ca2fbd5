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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fuzztune/common/errors.h"
#include "fuzztune/common/rng.h"
#include "fuzztune/eval/eval.h"
#include "map_oracle.h"
#include "test_util.h"

namespace fuzztune::eval {
namespace {

using testing::OracleMap;
using testing::RandomTable;

TEST_CASE("random instances match the brute-force oracle") {
  Rng rng(2024);
  for (int i = 0; i < 300; ++i) {
    auto t = RandomTable(rng, i % 3 == 0);
    for (Similarity s : {Similarity::kCosine, Similarity::kDot}) {
      std::map<std::string, std::pair<double, int>> per;
      double expected = OracleMap(t, s, &per);
      EvalReport r = MapAtR(t, s);
      CHECK(std::abs(r.map_at_r - expected) <= 1e-12);
      CHECK(r.n_queries == t.size());
      REQUIRE(r.per_problem.size() == per.size());
      for (const auto& [label, acc] : per) {
        CHECK(std::abs(r.per_problem.at(label).map_at_r - acc.first / acc.second) <= 1e-12);
        CHECK(r.per_problem.at(label).n_queries == static_cast<size_t>(acc.second));
      }
    }
  }
}

TEST_CASE("perfect and worst retrieval") {
  EmbeddingTable perfect{{"a", "b", "c", "d"},
                         {"p", "p", "q", "q"},
                         {{1, 0}, {1, 0}, {0, 1}, {0, 1}}};
  CHECK(MapAtR(perfect).map_at_r == 1.0);

  // Same class orthogonal, cross class identical.
  EmbeddingTable worst{{"a", "b", "c", "d"},
                       {"p", "p", "q", "q"},
                       {{1, 0}, {0, 1}, {1, 0}, {0, 1}}};
  CHECK(MapAtR(worst).map_at_r == 0.0);
}

TEST_CASE("ties go to the smaller id") {
  // Query x sees y (same class) and z (other) at equal similarity.
  EmbeddingTable t{{"x", "y", "z", "w"},
                   {"p", "p", "q", "q"},
                   {{1, 0}, {1, 0}, {1, 0}, {1, 0}}};
  // Per query with R = 1: x -> y (ids w<y: w wins, wrong), y -> w wrong,
  // z -> w right, w -> x wrong.
  EvalReport r = MapAtR(t);
  CHECK(r.map_at_r == doctest::Approx(0.25));
  CHECK(r.per_problem.at("q").map_at_r == doctest::Approx(0.5));
  CHECK(r.per_problem.at("p").map_at_r == 0.0);
}

TEST_CASE("invariances") {
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    auto t = RandomTable(rng, i % 2 == 0);
    double base = MapAtR(t).map_at_r;

    auto scaled = t;
    for (auto& v : scaled.vectors) for (auto& x : v) x *= 4.0;  // power of two: exact
    CHECK(MapAtR(scaled).map_at_r == base);

    auto shuffled = t;
    for (size_t k = shuffled.size(); k > 1; --k) {
      size_t j = rng.Below(k);
      std::swap(shuffled.ids[k - 1], shuffled.ids[j]);
      std::swap(shuffled.labels[k - 1], shuffled.labels[j]);
      std::swap(shuffled.vectors[k - 1], shuffled.vectors[j]);
    }
    CHECK(std::abs(MapAtR(shuffled).map_at_r - base) <= 1e-12);
    CHECK(MapAtR(t, Similarity::kCosine, 3).map_at_r == base);
  }
}

TEST_CASE("per-problem rows") {
  EmbeddingTable one{{"a", "b", "c"}, {"p", "p", "p"}, {{1, 2}, {3, 1}, {0, 1}}};
  EvalReport r = MapAtR(one);
  REQUIRE(r.per_problem.size() == 1);
  CHECK(r.per_problem.at("p").map_at_r == r.map_at_r);

  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    auto t = RandomTable(rng, false);
    EvalReport rep = MapAtR(t);
    double weighted = 0;
    for (const auto& [label, s] : rep.per_problem) weighted += s.map_at_r * s.n_queries;
    CHECK(std::abs(weighted / rep.n_queries - rep.map_at_r) <= 1e-12);
  }

  // Class "bad" sits on top of the others' clusters.
  EmbeddingTable adv;
  for (int c = 0; c < 3; ++c) {
    for (int k = 0; k < 4; ++k) {
      adv.ids.push_back("c" + std::to_string(c) + "_" + std::to_string(k));
      adv.labels.push_back("good" + std::to_string(c));
      std::vector<double> v(3, 0.0);
      v[c] = 1.0;
      v[(c + 1) % 3] = 0.05 * k;
      adv.vectors.push_back(v);
    }
  }
  for (int k = 0; k < 4; ++k) {
    adv.ids.push_back("bad_" + std::to_string(k));
    adv.labels.push_back("bad");
    std::vector<double> v(3, 0.0);
    v[k % 3] = 1.0;
    v[(k + 2) % 3] = 0.02;
    adv.vectors.push_back(v);
  }
  std::map<std::string, std::pair<double, int>> per;
  OracleMap(adv, Similarity::kCosine, &per);
  EvalReport ar = MapAtR(adv);
  double bad = ar.per_problem.at("bad").map_at_r;
  CHECK(std::abs(bad - per["bad"].first / per["bad"].second) <= 1e-12);
  for (const auto& [label, s] : ar.per_problem) {
    if (label != "bad") CHECK(s.map_at_r > bad);
  }

  std::string csv = PerProblemCsv(ar);
  CHECK(csv.rfind("problem_id,map_at_r,n_queries\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  auto series = PerProblemSeries(ar);
  CHECK(series["problem_id"].size() == 4);
  CHECK(series["problem_id"][0] == "bad");
  CHECK(series["map_at_r"][0].get<double>() == bad);
  auto j = ReportToJson(ar);
  CHECK(j["similarity"] == "cosine");
  CHECK(j["per_problem"]["bad"]["n_queries"] == 4);
}

TEST_CASE("contract errors") {
  EmbeddingTable single{{"a", "b", "c"}, {"p", "p", "lonely"}, {{1}, {2}, {3}}};
  try {
    MapAtR(single);
    FAIL("expected an error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("lonely") != std::string::npos);
  }
  EmbeddingTable dup{{"a", "a"}, {"p", "p"}, {{1}, {2}}};
  CHECK_THROWS_AS(MapAtR(dup), PreconditionError);
  EmbeddingTable ragged{{"a", "b"}, {"p", "p"}, {{1}, {2, 3}}};
  CHECK_THROWS_AS(MapAtR(ragged), PreconditionError);
  EmbeddingTable nan{{"a", "b"}, {"p", "p"}, {{1}, {std::nan("")}}};
  CHECK_THROWS_AS(MapAtR(nan), PreconditionError);
  CHECK_THROWS_AS(MapAtR(EmbeddingTable{}), PreconditionError);
  CHECK_THROWS_AS(ParseSimilarity("l2"), PreconditionError);
  CHECK(ParseSimilarity("dot") == Similarity::kDot);
}

TEST_CASE("error rate") {
  std::vector<std::string> truth(200, "a");
  CHECK(ErrorRate(truth, truth) == 0.0);
  CHECK(ErrorRate(std::vector<std::string>(200, "b"), truth) == 1.0);
  auto pred = truth;
  pred[3] = pred[50] = pred[199] = "z";
  CHECK(ErrorRate(pred, truth) == 0.015);
  CHECK_THROWS_AS(ErrorRate({"a"}, {"a", "b"}), PreconditionError);
  CHECK_THROWS_AS(ErrorRate({}, {}), PreconditionError);
}

TEST_CASE("embedding and prediction files") {
  ScopedTempDir dir;
  Rng rng(1);
  auto t = RandomTable(rng, false);
  WriteEmbeddings(dir.path() / "emb.tsv", t);
  auto back = ReadEmbeddings(dir.path() / "emb.tsv");
  CHECK(back.ids == t.ids);
  CHECK(back.labels == t.labels);
  CHECK(back.vectors == t.vectors);

  testing::WriteFile(dir.path() / "hand.tsv", "2 3\nx\tp\t1 0 0.5\ny\tp\t-1e-3 2 3\n");
  auto hand = ReadEmbeddings(dir.path() / "hand.tsv");
  CHECK(hand.dim() == 3);
  CHECK(hand.vectors[1][0] == -1e-3);

  for (std::string bad : {"", "2\nx\tp\t1\n", "1 2\nx\tp\t1\n", "2 1\nx\tp\t1\n",
                          "1 1\nx p 1\n", "1 1\nx\tp\tnan\n", "1 1\nx\tp\tabc\n"}) {
    CAPTURE(bad);
    testing::WriteFile(dir.path() / "bad.tsv", bad);
    CHECK_THROWS_AS(ReadEmbeddings(dir.path() / "bad.tsv"), PreconditionError);
  }

  EmbeddingTable sub = Restrict(t, {t.ids[1], t.ids[0], "missing"});
  CHECK(sub.ids == std::vector<std::string>{t.ids[0], t.ids[1]});

  Predictions p{{"p1/a.cpp", "p2/b,c.cpp"}, {"p1", "p3"}, {"p1", "p2"}};
  WritePredictions(dir.path() / "pred.csv", p);
  CHECK(ReadFileText(dir.path() / "pred.csv") ==
        "id,prediction,label\np1/a.cpp,p1,p1\n\"p2/b,c.cpp\",p3,p2\n");
  auto pr = ReadPredictions(dir.path() / "pred.csv");
  CHECK(pr.ids == p.ids);
  CHECK(ErrorRate(pr.predictions, pr.labels) == 0.5);
  testing::WriteFile(dir.path() / "bad.csv", "id,label\n");
  CHECK_THROWS_AS(ReadPredictions(dir.path() / "bad.csv"), PreconditionError);
  testing::WriteFile(dir.path() / "bad.csv", "id,prediction,label\na,b\n");
  CHECK_THROWS_AS(ReadPredictions(dir.path() / "bad.csv"), PreconditionError);
}

}  // namespace
}  // namespace fuzztune::eval
