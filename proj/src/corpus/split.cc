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

#include "fuzztune/corpus/split.h"

#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "fuzztune/common/errors.h"
#include "fuzztune/common/rng.h"

namespace fuzztune::corpus {
namespace {

constexpr const char* kSplitNames[3] = {"train", "val", "test"};

// Re-emits the selected ids in corpus order so output order never depends
// on the shuffle.
std::vector<std::string> InCorpusOrder(const Corpus& corpus,
                                       const std::unordered_set<std::string>& ids) {
  std::vector<std::string> out;
  for (const auto& p : corpus.programs) {
    if (ids.count(p.id)) out.push_back(p.id);
  }
  return out;
}

std::map<std::string, std::vector<std::string>> ProgramsByProblem(
    const Corpus& corpus) {
  std::map<std::string, std::vector<std::string>> by_problem;
  for (const auto& p : corpus.programs) by_problem[p.problem_id].push_back(p.id);
  return by_problem;
}

}  // namespace

std::string_view TaskName(Task task) {
  return task == Task::kCloneDetection ? "clone_detection" : "classification";
}

Task ParseTask(std::string_view name) {
  if (name == "clone_detection") return Task::kCloneDetection;
  if (name == "classification") return Task::kClassification;
  throw PreconditionError("unknown task '" + std::string(name) + "'");
}

std::string_view SplitUnitName(SplitUnit unit) {
  return unit == SplitUnit::kProblems ? "problems" : "programs";
}

SplitUnit ParseSplitUnit(std::string_view name) {
  if (name == "problems") return SplitUnit::kProblems;
  if (name == "programs") return SplitUnit::kPrograms;
  throw PreconditionError("unknown split unit '" + std::string(name) + "'");
}

void SplitSpec::Validate() const {
  Rational total;
  for (const auto& f : fractions) {
    if (f <= Rational(0)) {
      throw PreconditionError("split fractions must be strictly positive");
    }
    total = total + f;
  }
  if (total != Rational(1)) {
    throw PreconditionError("split fractions sum to " + total.ToString() +
                            ", not 1");
  }
  if (task == Task::kCloneDetection && unit != SplitUnit::kProblems) {
    throw PreconditionError(
        "clone detection splits must partition problems, not programs");
  }
}

SplitSpec SplitSpec::Default(Task task, std::string_view layout) {
  SplitSpec spec;
  spec.task = task;
  if (task == Task::kCloneDetection) {
    spec.unit = SplitUnit::kProblems;
    if (layout == "poj104") {
      spec.fractions = {Rational(64, 104), Rational(16, 104), Rational(24, 104)};
    } else {
      spec.fractions = {Rational(1, 2), Rational(1, 4), Rational(1, 4)};
    }
    return spec;
  }
  spec.unit = SplitUnit::kPrograms;
  if (layout == "poj104") {
    spec.fractions = {Rational(3, 5), Rational(1, 5), Rational(1, 5)};
  } else {
    spec.fractions = {Rational(1, 2), Rational(1, 4), Rational(1, 4)};
  }
  return spec;
}

std::string_view Splits::TagOf(std::string_view program_id) const {
  const std::vector<std::string>* lists[3] = {&train, &val, &test};
  for (int i = 0; i < 3; ++i) {
    for (const auto& id : *lists[i]) {
      if (id == program_id) return kSplitNames[i];
    }
  }
  return "";
}

Splits Split(const Corpus& corpus, const SplitSpec& spec) {
  spec.Validate();
  if (corpus.programs.empty()) throw PreconditionError("empty corpus");
  std::vector<Rational> fractions(spec.fractions.begin(), spec.fractions.end());
  Rng rng(spec.seed);
  auto by_problem = ProgramsByProblem(corpus);
  std::unordered_set<std::string> chosen[3];

  if (spec.unit == SplitUnit::kProblems) {
    std::vector<std::string> problems;
    for (const auto& [pid, ids] : by_problem) problems.push_back(pid);
    rng.Shuffle(problems);
    auto counts = Apportion(static_cast<std::int64_t>(problems.size()), fractions);
    size_t cursor = 0;
    for (int s = 0; s < 3; ++s) {
      if (counts[s] == 0) {
        throw PreconditionError(std::string("split '") + kSplitNames[s] +
                                "' would contain no problems");
      }
      for (std::int64_t k = 0; k < counts[s]; ++k, ++cursor) {
        for (const auto& id : by_problem[problems[cursor]]) chosen[s].insert(id);
      }
    }
  } else {
    // Stratified: each problem's programs are apportioned separately.
    for (auto& [pid, ids] : by_problem) {
      std::vector<std::string> shuffled = ids;
      rng.Shuffle(shuffled);
      auto counts = Apportion(static_cast<std::int64_t>(shuffled.size()), fractions);
      size_t cursor = 0;
      for (int s = 0; s < 3; ++s) {
        for (std::int64_t k = 0; k < counts[s]; ++k, ++cursor) {
          chosen[s].insert(shuffled[cursor]);
        }
      }
    }
    for (int s = 0; s < 3; ++s) {
      if (chosen[s].empty()) {
        throw PreconditionError(std::string("split '") + kSplitNames[s] +
                                "' would contain no programs");
      }
    }
  }
  return Splits{InCorpusOrder(corpus, chosen[0]), InCorpusOrder(corpus, chosen[1]),
                InCorpusOrder(corpus, chosen[2])};
}

Splits Subsample(const Corpus& corpus, const Splits& splits, Rational ratio,
                 SplitUnit unit, std::uint64_t seed) {
  if (ratio <= Rational(0) || ratio > Rational(1)) {
    throw PreconditionError("subsample ratio must lie in (0, 1], got " +
                            ratio.ToString());
  }
  Rng rng(seed);
  Splits out;
  out.test = splits.test;

  if (unit == SplitUnit::kProblems) {
    std::unordered_map<std::string, std::string> problem_of;
    for (const auto& p : corpus.programs) problem_of[p.id] = p.problem_id;
    auto keep_problems = [&](const std::vector<std::string>& ids) {
      std::set<std::string> problems;
      for (const auto& id : ids) problems.insert(problem_of.at(id));
      std::vector<std::string> order(problems.begin(), problems.end());
      rng.Shuffle(order);
      order.resize(static_cast<size_t>(
          ratio.RoundTimes(static_cast<std::int64_t>(order.size()))));
      std::unordered_set<std::string> kept(order.begin(), order.end());
      std::unordered_set<std::string> selected;
      for (const auto& id : ids) {
        if (kept.count(problem_of.at(id))) selected.insert(id);
      }
      return InCorpusOrder(corpus, selected);
    };
    out.train = keep_problems(splits.train);
    out.val = keep_problems(splits.val);
  } else {
    if (ratio == Rational(1)) {
      out.train = splits.train;
      out.val = splits.val;
      return out;
    }
    const auto pool = static_cast<std::int64_t>(splits.train.size() +
                                                splits.val.size());
    const std::int64_t keep = ratio.RoundTimes(pool);
    const std::int64_t n_train = Rational(4, 5).RoundTimes(keep);
    const std::int64_t n_val = keep - n_train;
    if (n_train > static_cast<std::int64_t>(splits.train.size()) ||
        n_val > static_cast<std::int64_t>(splits.val.size())) {
      throw PreconditionError(
          "train/val pools too small for a 4:1 subsample at ratio " +
          ratio.ToString());
    }
    auto take = [&](const std::vector<std::string>& ids, std::int64_t n) {
      std::vector<std::string> order = ids;
      rng.Shuffle(order);
      order.resize(static_cast<size_t>(n));
      return InCorpusOrder(corpus, {order.begin(), order.end()});
    };
    out.train = take(splits.train, n_train);
    out.val = take(splits.val, n_val);
  }
  if (out.train.empty()) {
    throw PreconditionError("subsample ratio " + ratio.ToString() +
                            " leaves the train split empty");
  }
  return out;
}

nlohmann::ordered_json SplitsToJson(const Splits& splits, const SplitSpec& spec) {
  nlohmann::ordered_json j;
  auto& s = j["spec"];
  s["task"] = TaskName(spec.task);
  s["unit"] = SplitUnitName(spec.unit);
  s["fractions"] = nlohmann::ordered_json::array();
  for (const auto& f : spec.fractions) s["fractions"].push_back(f.ToString());
  s["seed"] = spec.seed;
  j["train"] = splits.train;
  j["val"] = splits.val;
  j["test"] = splits.test;
  return j;
}

Splits SplitsFromJson(const nlohmann::ordered_json& j) {
  Splits s;
  s.train = j.at("train").get<std::vector<std::string>>();
  s.val = j.at("val").get<std::vector<std::string>>();
  s.test = j.at("test").get<std::vector<std::string>>();
  return s;
}

}  // namespace fuzztune::corpus
