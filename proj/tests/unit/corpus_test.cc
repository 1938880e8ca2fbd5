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

#include <set>
#include <unordered_map>

#include "doctest.h"
#include "fuzztune/common/errors.h"
#include "fuzztune/common/fs_util.h"
#include "fuzztune/common/rng.h"
#include "fuzztune/common/utf8.h"
#include "fuzztune/corpus/corpus.h"
#include "fuzztune/corpus/split.h"
#include "test_util.h"

namespace fuzztune::corpus {
namespace {

using fuzztune::testing::SyntheticCorpus;
using fuzztune::testing::WriteFile;

std::set<std::string> ProblemsOf(const Corpus& c,
                                 const std::vector<std::string>& ids) {
  std::set<std::string> out;
  for (const auto& id : ids) out.insert(c.Find(id)->problem_id);
  return out;
}

void CheckPartition(const Corpus& c, const Splits& s) {
  std::multiset<std::string> all;
  for (auto* list : {&s.train, &s.val, &s.test}) {
    all.insert(list->begin(), list->end());
  }
  CHECK(all.size() == c.programs.size());
  for (const auto& p : c.programs) CHECK(all.count(p.id) == 1);
}

TEST_CASE("ingest_poj104 counts programs and classes") {
  ScopedTempDir root;
  for (const char* dir : {"1", "2"}) {
    for (const char* file : {"a.txt", "b.txt", "c.txt"}) {
      WriteFile(root.path() / dir / file, "int main(){}\n");
    }
  }
  Corpus c = IngestPoj104(root.path());
  CHECK(c.programs.size() == 6);
  CHECK(c.NumClasses() == 2);
  CHECK(c.warnings.empty());
  CHECK(c.programs.front().id == "1/a.txt");
  CHECK(c.programs.front().language == Language::kCpp);
  auto report = IngestReport(c);
  CHECK(report["programs"] == 6);
  CHECK(report["matches_expected"] == false);
}

TEST_CASE("ingest_poj104 skips undecodable files with a warning") {
  ScopedTempDir root;
  const std::string bad = "int main(){ /* \xFF\xFE */ }";
  WriteFile(root.path() / "1" / "bad.txt", bad);
  WriteFile(root.path() / "1" / "good.txt", "int main(){}");
  // Oracle: the decoder itself rejects the bytes.
  REQUIRE_FALSE(utf8::IsValid(ToBytes(bad)));
  Corpus c = IngestPoj104(root.path());
  REQUIRE(c.programs.size() == 1);
  CHECK(c.programs[0].id == "1/good.txt");
  REQUIRE(c.warnings.size() == 1);
  CHECK(c.warnings[0].path.filename() == "bad.txt");
}

TEST_CASE("ingest_poj104 rejects an empty root") {
  ScopedTempDir root;
  CHECK_THROWS_AS(IngestPoj104(root.path()), CorpusError);
  CHECK_THROWS_AS(IngestPoj104(root.path() / "missing"), CorpusError);
}

TEST_CASE("ingest_codenet reads a miniature subset") {
  ScopedTempDir root;
  fs::path base = root.path() / "Project_CodeNet_Java250";
  for (const char* dir : {"p00001", "p00002", "p00003"}) {
    WriteFile(base / dir / "s1.java", "class Main {}");
    WriteFile(base / dir / "s2.java", "class Main {}");
  }
  WriteFile(base / "p00001" / "stray.py", "print(1)");
  Corpus c = IngestCodeNet(root.path(), CodeNetSubset::kJava250);
  CHECK(c.programs.size() == 6);
  CHECK(c.NumClasses() == 3);
  CHECK(c.warnings.size() == 1);
  CHECK(c.expected_classes == 250u);
  CHECK(c.expected_programs == 75000u);
  for (const auto& p : c.programs) CHECK(p.language == Language::kJava);

  CHECK_THROWS_AS(IngestCodeNet(root.path(), CodeNetSubset::kPython800),
                  CorpusError);
}

TEST_CASE("split 64/16/24 over 104 classes") {
  Corpus c = SyntheticCorpus(104, 3);
  SplitSpec spec;  // clone detection, 64:16:24 of problems
  spec.seed = 9;
  Splits s = Split(c, spec);
  CHECK(ProblemsOf(c, s.train).size() == 64);
  CHECK(ProblemsOf(c, s.val).size() == 16);
  CHECK(ProblemsOf(c, s.test).size() == 24);
  CheckPartition(c, s);
}

TEST_CASE("split 4 classes at 1/2,1/4,1/4 for any seed") {
  Corpus c = SyntheticCorpus(4, 2);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SplitSpec spec;
    spec.fractions = {Rational(1, 2), Rational(1, 4), Rational(1, 4)};
    spec.seed = seed;
    Splits s = Split(c, spec);
    CHECK(ProblemsOf(c, s.train).size() == 2);
    CHECK(ProblemsOf(c, s.val).size() == 1);
    CHECK(ProblemsOf(c, s.test).size() == 1);
  }
}

TEST_CASE("split is deterministic given the seed") {
  Corpus c = SyntheticCorpus(30, 5);
  SplitSpec spec;
  spec.seed = 123;
  CHECK(Split(c, spec) == Split(c, spec));
  SplitSpec other = spec;
  other.seed = 124;
  CHECK_FALSE(Split(c, spec) == Split(c, other));
}

TEST_CASE("split errors") {
  Corpus c = SyntheticCorpus(2, 4);
  SplitSpec spec;  // 64:16:24 of 2 problems cannot fill three splits
  CHECK_THROWS_AS(Split(c, spec), PreconditionError);
  spec.fractions = {Rational(1, 2), Rational(1, 2), Rational(0)};
  CHECK_THROWS_AS(spec.Validate(), PreconditionError);
  spec.fractions = {Rational(1, 2), Rational(1, 4), Rational(1, 5)};
  CHECK_THROWS_AS(spec.Validate(), PreconditionError);
  SplitSpec bad_unit;
  bad_unit.unit = SplitUnit::kPrograms;
  CHECK_THROWS_AS(bad_unit.Validate(), PreconditionError);
  CHECK_THROWS_AS(Split(Corpus{}, SplitSpec::Default(Task::kClassification, "")),
                  PreconditionError);
}

TEST_CASE("property: splits partition the corpus; clone splits are class-disjoint") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    int classes = 3 + static_cast<int>(rng.Below(40));
    int per_class = 1 + static_cast<int>(rng.Below(8));
    Corpus c = SyntheticCorpus(classes, per_class);
    SplitSpec spec;
    spec.seed = rng();
    bool clone = rng.Chance(1, 2);
    if (!clone) {
      spec = SplitSpec::Default(Task::kClassification, "poj104");
      spec.seed = rng();
    }
    Splits s;
    try {
      s = Split(c, spec);
    } catch (const PreconditionError&) {
      continue;  // too small for a nonempty three-way split
    }
    CheckPartition(c, s);
    if (clone) {
      auto a = ProblemsOf(c, s.train), b = ProblemsOf(c, s.val),
           t = ProblemsOf(c, s.test);
      for (const auto& p : a) {
        CHECK(b.count(p) == 0);
        CHECK(t.count(p) == 0);
      }
      for (const auto& p : b) CHECK(t.count(p) == 0);
    }
  }
}

TEST_CASE("classification split is stratified by problem") {
  Corpus c = SyntheticCorpus(5, 10);
  Splits s = Split(c, SplitSpec::Default(Task::kClassification, "poj104"));
  std::unordered_map<std::string, int> train_per_problem;
  for (const auto& id : s.train) ++train_per_problem[c.Find(id)->problem_id];
  CHECK(train_per_problem.size() == 5);
  for (const auto& [pid, n] : train_per_problem) CHECK(n == 6);
}

TEST_CASE("subsample problems keeps the rounded fraction, test untouched") {
  Corpus c = SyntheticCorpus(130, 2);
  SplitSpec spec;
  spec.fractions = {Rational(100, 130), Rational(10, 130), Rational(20, 130)};
  Splits s = Split(c, spec);
  REQUIRE(ProblemsOf(c, s.train).size() == 100);
  Splits sub = Subsample(c, s, Rational::Parse("16%"), SplitUnit::kProblems, 3);
  CHECK(ProblemsOf(c, sub.train).size() == 16);
  CHECK(ProblemsOf(c, sub.val).size() == 2);  // round(1.6)
  CHECK(sub.test == s.test);
  CHECK(Subsample(c, s, Rational(1), SplitUnit::kProblems, 3) == s);
}

TEST_CASE("subsample programs with 4:1 train:val") {
  // Pool of 1000 programs at 4:1.
  Corpus c = SyntheticCorpus(10, 110);
  Splits s;
  for (size_t i = 0; i < c.programs.size(); ++i) {
    const auto& id = c.programs[i].id;
    if (i < 800) s.train.push_back(id);
    else if (i < 1000) s.val.push_back(id);
    else s.test.push_back(id);
  }
  // Oracle by counting: keep = ratio * 1000, train = 4/5 of keep.
  struct Case { const char* ratio; size_t train, val; };
  for (Case k : {Case{"10%", 80, 20}, Case{"20%", 160, 40}, Case{"40%", 320, 80}}) {
    Splits sub = Subsample(c, s, Rational::Parse(k.ratio), SplitUnit::kPrograms, 5);
    CHECK(sub.train.size() == k.train);
    CHECK(sub.val.size() == k.val);
    CHECK(sub.test == s.test);
    std::set<std::string> train(s.train.begin(), s.train.end());
    for (const auto& id : sub.train) CHECK(train.count(id) == 1);
  }
  CHECK(Subsample(c, s, Rational(1), SplitUnit::kPrograms, 5) == s);
  CHECK(Subsample(c, s, Rational(2, 5), SplitUnit::kPrograms, 5) ==
        Subsample(c, s, Rational(2, 5), SplitUnit::kPrograms, 5));
}

TEST_CASE("subsample errors and monotonicity") {
  Corpus c = SyntheticCorpus(20, 6);
  SplitSpec spec = SplitSpec::Default(Task::kClassification, "poj104");
  spec.fractions = {Rational(4, 6), Rational(1, 6), Rational(1, 6)};
  Splits s = Split(c, spec);
  CHECK_THROWS_AS(Subsample(c, s, Rational(0), SplitUnit::kPrograms, 1),
                  PreconditionError);
  CHECK_THROWS_AS(Subsample(c, s, Rational(3, 2), SplitUnit::kPrograms, 1),
                  PreconditionError);
  CHECK_THROWS_AS(Subsample(c, s, Rational(1, 1000), SplitUnit::kPrograms, 1),
                  PreconditionError);
  size_t prev = 0;
  for (int pct = 5; pct <= 100; pct += 5) {
    Splits sub = Subsample(c, s, Rational(pct, 100), SplitUnit::kPrograms, 1);
    CHECK(sub.train.size() >= prev);
    prev = sub.train.size();
  }
}

TEST_CASE("splits manifest round trip") {
  Corpus c = SyntheticCorpus(8, 2);
  SplitSpec spec = SplitSpec::Default(Task::kCloneDetection, "other");
  Splits s = Split(c, spec);
  auto j = SplitsToJson(s, spec);
  CHECK(j["spec"]["fractions"][0] == "1/2");
  CHECK(SplitsFromJson(j) == s);
  CHECK(s.TagOf(s.val.front()) == "val");
  CHECK(s.TagOf("nope") == "");
}

}  // namespace
}  // namespace fuzztune::corpus
