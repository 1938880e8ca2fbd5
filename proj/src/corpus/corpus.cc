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

#include "fuzztune/corpus/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>

#include "fuzztune/common/errors.h"
#include "fuzztune/common/fs_util.h"
#include "fuzztune/common/utf8.h"

namespace fuzztune::corpus {
namespace {

std::vector<fs::path> SortedEntries(const fs::path& dir, bool want_dirs) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.empty() || name.front() == '.') continue;
    std::error_code ec;
    bool is_dir = entry.is_directory(ec);
    if (want_dirs ? is_dir : entry.is_regular_file(ec)) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return out;
}

// Reads one problem directory; `accept` decides which languages belong.
template <typename Accept>
void IngestProblemDir(const fs::path& dir, bool txt_is_cpp, Accept accept,
                      Corpus& corpus) {
  const std::string problem_id = dir.filename().string();
  for (const auto& file : SortedEntries(dir, /*want_dirs=*/false)) {
    auto language = LanguageFromPath(file, txt_is_cpp);
    if (!language || !accept(*language)) {
      corpus.warnings.push_back({file, "unsupported or mismatched extension"});
      continue;
    }
    Bytes raw;
    try {
      raw = ReadFileBytes(file);
    } catch (const Error&) {
      corpus.warnings.push_back({file, "unreadable"});
      continue;
    }
    if (!utf8::IsValid(raw)) {
      corpus.warnings.push_back({file, "not valid UTF-8"});
      continue;
    }
    Program p;
    p.problem_id = problem_id;
    p.id = problem_id + "/" + file.filename().string();
    p.language = *language;
    p.source_path = file;
    p.source.assign(raw.begin(), raw.end());
    p.byte_len = raw.size();
    corpus.programs.push_back(std::move(p));
  }
}

void RequireDir(const fs::path& root, std::string_view what) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw CorpusError(std::string(what) + " '" + root.string() +
                      "' is not a directory");
  }
}

}  // namespace

std::string_view LanguageName(Language language) {
  switch (language) {
    case Language::kCpp: return "cpp";
    case Language::kJava: return "java";
    case Language::kPython: return "python";
  }
  return "cpp";
}

Language ParseLanguage(std::string_view name) {
  if (name == "cpp") return Language::kCpp;
  if (name == "java") return Language::kJava;
  if (name == "python") return Language::kPython;
  throw PreconditionError("unknown language '" + std::string(name) + "'");
}

std::optional<Language> LanguageFromPath(const fs::path& path, bool txt_is_cpp) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".c" || ext == ".cc" || ext == ".cpp" || ext == ".cxx" ||
      ext == ".c++") {
    return Language::kCpp;
  }
  if (ext == ".txt" && txt_is_cpp) return Language::kCpp;
  if (ext == ".java") return Language::kJava;
  if (ext == ".py") return Language::kPython;
  return std::nullopt;
}

std::string_view SourceExtension(Language language) {
  switch (language) {
    case Language::kCpp: return ".cpp";
    case Language::kJava: return ".java";
    case Language::kPython: return ".py";
  }
  return ".cpp";
}

size_t Corpus::NumClasses() const { return ProblemIds().size(); }

std::vector<std::string> Corpus::ProblemIds() const {
  std::set<std::string> ids;
  for (const auto& p : programs) ids.insert(p.problem_id);
  return {ids.begin(), ids.end()};
}

const Program* Corpus::Find(std::string_view id) const {
  for (const auto& p : programs) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

Corpus IngestPoj104(const fs::path& root) {
  RequireDir(root, "POJ-104 root");
  Corpus corpus;
  corpus.layout = "poj104";
  corpus.expected_classes = 104;
  corpus.expected_programs = 104 * 500;
  auto dirs = SortedEntries(root, /*want_dirs=*/true);
  if (dirs.empty()) {
    throw CorpusError("POJ-104 root '" + root.string() +
                      "' contains no problem directories");
  }
  for (const auto& dir : dirs) {
    IngestProblemDir(dir, /*txt_is_cpp=*/true,
                     [](Language) { return true; }, corpus);
  }
  return corpus;
}

CodeNetSubset ParseCodeNetSubset(std::string_view name) {
  if (name == "java250") return CodeNetSubset::kJava250;
  if (name == "python800") return CodeNetSubset::kPython800;
  if (name == "cpp1000") return CodeNetSubset::kCpp1000;
  throw PreconditionError("unknown CodeNet subset '" + std::string(name) + "'");
}

std::string_view CodeNetSubsetName(CodeNetSubset subset) {
  switch (subset) {
    case CodeNetSubset::kJava250: return "java250";
    case CodeNetSubset::kPython800: return "python800";
    case CodeNetSubset::kCpp1000: return "cpp1000";
  }
  return "";
}

std::string_view CodeNetSubsetDir(CodeNetSubset subset) {
  switch (subset) {
    case CodeNetSubset::kJava250: return "Project_CodeNet_Java250";
    case CodeNetSubset::kPython800: return "Project_CodeNet_Python800";
    case CodeNetSubset::kCpp1000: return "Project_CodeNet_C++1000";
  }
  return "";
}

Corpus IngestCodeNet(const fs::path& root, CodeNetSubset subset) {
  RequireDir(root, "CodeNet root");
  fs::path subset_dir = root / std::string(CodeNetSubsetDir(subset));
  RequireDir(subset_dir, "CodeNet subset directory");

  Corpus corpus;
  corpus.layout = std::string(CodeNetSubsetName(subset));
  Language want = Language::kCpp;
  switch (subset) {
    case CodeNetSubset::kJava250:
      want = Language::kJava;
      corpus.expected_classes = 250;
      corpus.expected_programs = 250 * 300;
      break;
    case CodeNetSubset::kPython800:
      want = Language::kPython;
      corpus.expected_classes = 800;
      corpus.expected_programs = 800 * 300;
      break;
    case CodeNetSubset::kCpp1000:
      want = Language::kCpp;
      corpus.expected_classes = 1000;
      corpus.expected_programs = 1000 * 500;
      break;
  }
  auto dirs = SortedEntries(subset_dir, /*want_dirs=*/true);
  if (dirs.empty()) {
    throw CorpusError("CodeNet subset '" + subset_dir.string() +
                      "' contains no problem directories");
  }
  for (const auto& dir : dirs) {
    IngestProblemDir(dir, /*txt_is_cpp=*/false,
                     [want](Language l) { return l == want; }, corpus);
  }
  return corpus;
}

nlohmann::ordered_json IngestReport(const Corpus& corpus) {
  nlohmann::ordered_json j;
  j["layout"] = corpus.layout;
  j["programs"] = corpus.programs.size();
  j["classes"] = corpus.NumClasses();
  if (corpus.expected_classes) j["expected_classes"] = *corpus.expected_classes;
  if (corpus.expected_programs) {
    j["expected_programs"] = *corpus.expected_programs;
  }
  j["matches_expected"] =
      corpus.expected_classes && corpus.expected_programs &&
      *corpus.expected_classes == corpus.NumClasses() &&
      *corpus.expected_programs == corpus.programs.size();
  auto& warnings = j["warnings"] = nlohmann::ordered_json::array();
  for (const auto& w : corpus.warnings) {
    warnings.push_back({{"path", w.path.string()}, {"reason", w.reason}});
  }
  return j;
}

nlohmann::ordered_json CorpusToJson(const Corpus& corpus) {
  nlohmann::ordered_json j;
  j["layout"] = corpus.layout;
  auto& programs = j["programs"] = nlohmann::ordered_json::array();
  for (const auto& p : corpus.programs) {
    programs.push_back({{"id", p.id},
                        {"problem_id", p.problem_id},
                        {"language", LanguageName(p.language)},
                        {"source_path", p.source_path.string()},
                        {"byte_len", p.byte_len}});
  }
  return j;
}

Corpus CorpusFromJson(const nlohmann::ordered_json& j) {
  Corpus corpus;
  corpus.layout = j.at("layout").get<std::string>();
  for (const auto& entry : j.at("programs")) {
    Program p;
    p.id = entry.at("id").get<std::string>();
    p.problem_id = entry.at("problem_id").get<std::string>();
    p.language = ParseLanguage(entry.at("language").get<std::string>());
    p.source_path = entry.at("source_path").get<std::string>();
    p.byte_len = entry.at("byte_len").get<size_t>();
    corpus.programs.push_back(std::move(p));
  }
  return corpus;
}

}  // namespace fuzztune::corpus
