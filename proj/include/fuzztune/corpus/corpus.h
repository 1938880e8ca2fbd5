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

#ifndef FUZZTUNE_CORPUS_CORPUS_H_
#define FUZZTUNE_CORPUS_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace fuzztune::corpus {

enum class Language { kCpp, kJava, kPython };

std::string_view LanguageName(Language language);
Language ParseLanguage(std::string_view name);

// .c/.cc/.cpp/.cxx/.c++ -> cpp, .java -> java, .py -> python. POJ-104 ships
// its C/C++ programs as .txt, so `txt_is_cpp` maps those too.
std::optional<Language> LanguageFromPath(const std::filesystem::path& path,
                                         bool txt_is_cpp);

std::string_view SourceExtension(Language language);

struct Program {
  std::string id;          // "<problem_id>/<file name>", unique per corpus
  std::string problem_id;  // class label
  Language language = Language::kCpp;
  std::filesystem::path source_path;
  std::string source;
  size_t byte_len = 0;
};

struct IngestWarning {
  std::filesystem::path path;
  std::string reason;
};

struct Corpus {
  std::string layout;  // "poj104", "java250", ...
  std::vector<Program> programs;  // sorted by (problem_id, file name)
  std::vector<IngestWarning> warnings;
  std::optional<size_t> expected_classes;
  std::optional<size_t> expected_programs;

  size_t NumClasses() const;
  std::vector<std::string> ProblemIds() const;  // sorted, unique
  const Program* Find(std::string_view id) const;
};

// One directory per problem under `root`; every readable UTF-8 file in it
// becomes a Program labelled with the directory name. Throws CorpusError
// when the root holds no problem directories.
Corpus IngestPoj104(const std::filesystem::path& root);

enum class CodeNetSubset { kJava250, kPython800, kCpp1000 };

CodeNetSubset ParseCodeNetSubset(std::string_view name);
std::string_view CodeNetSubsetName(CodeNetSubset subset);
// Directory name under the CodeNet root, e.g. "Project_CodeNet_Java250".
std::string_view CodeNetSubsetDir(CodeNetSubset subset);

// Reads <root>/<CodeNetSubsetDir(subset)>/<problem>/<submission>. Files whose
// language does not match the subset are skipped with a warning.
Corpus IngestCodeNet(const std::filesystem::path& root, CodeNetSubset subset);

nlohmann::ordered_json IngestReport(const Corpus& corpus);
nlohmann::ordered_json CorpusToJson(const Corpus& corpus);
// Program metadata only; `source` is left empty.
Corpus CorpusFromJson(const nlohmann::ordered_json& j);

}  // namespace fuzztune::corpus

#endif  // FUZZTUNE_CORPUS_CORPUS_H_
