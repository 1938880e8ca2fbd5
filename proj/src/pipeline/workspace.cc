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

#include "fuzztune/pipeline/workspace.h"

#include <set>

#include "fuzztune/common/errors.h"
#include "fuzztune/common/fs_util.h"

namespace fuzztune::pipeline {
namespace {

constexpr Stage kAllStages[] = {Stage::kIngested, Stage::kRepaired, Stage::kBuilt,
                                Stage::kFuzzed,   Stage::kHarvested, Stage::kEmitted};

nlohmann::ordered_json ParseJsonFile(const fs::path& path) {
  try {
    return nlohmann::ordered_json::parse(ReadFileText(path));
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(path.string() + ": " + e.what());
  }
}

void WriteJson(const fs::path& path, const nlohmann::ordered_json& j) {
  WriteFileAtomic(path, std::string_view(j.dump(2) + "\n"));
}

corpus::Corpus ReadCorpus(const fs::path& corpus_root, const Config& config) {
  const std::string& layout = config.Get("layout");
  if (layout == "poj104") return corpus::IngestPoj104(corpus_root);
  return corpus::IngestCodeNet(corpus_root, corpus::ParseCodeNetSubset(layout));
}

std::string SourceFileName(corpus::Language lang) {
  return "source" + std::string(corpus::SourceExtension(lang));
}

}  // namespace

std::string_view StageName(Stage stage) {
  switch (stage) {
    case Stage::kIngested: return "ingested";
    case Stage::kRepaired: return "repaired";
    case Stage::kBuilt: return "built";
    case Stage::kFuzzed: return "fuzzed";
    case Stage::kHarvested: return "harvested";
    case Stage::kEmitted: return "emitted";
  }
  return "ingested";
}

Stage ParseStage(std::string_view name) {
  for (Stage s : kAllStages) {
    if (StageName(s) == name) return s;
  }
  throw PreconditionError("unknown stage '" + std::string(name) + "'");
}

nlohmann::ordered_json ProgramState::ToJson() const {
  nlohmann::ordered_json j;
  j["program_id"] = program_id;
  j["stage"] = StageName(stage);
  j["failed_step"] = failed_step;
  j["error"] = error;
  j["repair_status"] = repair_status;
  j["repair_rounds"] = repair_rounds;
  j["cov_binary"] = cov_binary;
  j["plain_binary"] = plain_binary;
  j["smoke_ok"] = smoke_ok;
  j["termination"] = termination;
  j["execs"] = execs;
  j["edges"] = edges;
  j["queue_size"] = queue_size;
  j["crashes"] = crashes;
  j["hangs"] = hangs;
  j["harvest_key"] = harvest_key;
  j["n_pairs"] = n_pairs;
  j["emit_key"] = emit_key;
  return j;
}

ProgramState ProgramState::FromJson(const nlohmann::ordered_json& j) {
  ProgramState s;
  try {
    s.program_id = j.at("program_id").get<std::string>();
    s.stage = ParseStage(j.at("stage").get<std::string>());
    s.failed_step = j.at("failed_step").get<std::string>();
    s.error = j.at("error").get<std::string>();
    s.repair_status = j.at("repair_status").get<std::string>();
    s.repair_rounds = j.at("repair_rounds").get<int>();
    s.cov_binary = j.at("cov_binary").get<std::string>();
    s.plain_binary = j.at("plain_binary").get<std::string>();
    s.smoke_ok = j.at("smoke_ok").get<bool>();
    s.termination = j.at("termination").get<std::string>();
    s.execs = j.at("execs").get<std::uint64_t>();
    s.edges = j.at("edges").get<std::uint64_t>();
    s.queue_size = j.at("queue_size").get<size_t>();
    s.crashes = j.at("crashes").get<std::uint64_t>();
    s.hangs = j.at("hangs").get<std::uint64_t>();
    s.harvest_key = j.at("harvest_key").get<std::string>();
    s.n_pairs = j.at("n_pairs").get<size_t>();
    s.emit_key = j.at("emit_key").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed program state: ") + e.what());
  }
  return s;
}

bool Workspace::Exists(const fs::path& root) {
  std::error_code ec;
  return fs::is_regular_file(root / "workspace.json", ec);
}

Workspace Workspace::Ingest(const fs::path& root, const fs::path& corpus_root,
                            const Overrides& overrides,
                            std::vector<std::string>* warnings) {
  const fs::path abs_corpus = fs::weakly_canonical(fs::absolute(corpus_root));
  if (Exists(root)) {
    Workspace ws = Open(root);
    if (ws.corpus_root_ != abs_corpus) {
      throw PreconditionError("workspace " + root.string() + " already holds corpus " +
                              ws.corpus_root_.string());
    }
    ws.Effective(overrides);  // rejects frozen changes
    return ws;
  }
  Config config = Config().With(overrides);
  config.Validate();
  corpus::Corpus c = ReadCorpus(abs_corpus, config);
  if (c.programs.empty()) {
    throw CorpusError("no programs found under " + abs_corpus.string());
  }
  if (warnings) {
    for (const auto& w : c.warnings) warnings->push_back(w.path.string() + ": " + w.reason);
  }
  std::set<std::string> dirs;
  for (const auto& p : c.programs) {
    if (!dirs.insert(SafePathComponent(p.id)).second) {
      throw CorpusError("program ids collide on disk: " + p.id);
    }
  }
  fs::create_directories(root);

  Workspace ws;
  ws.root_ = root;
  for (const auto& p : c.programs) {
    fs::path dir = ws.ProgramDir(p.id);
    fs::create_directories(dir);
    WriteFileAtomic(dir / SourceFileName(p.language), std::string_view(p.source));
    ProgramState st;
    st.program_id = p.id;
    ws.SaveState(st);
  }
  WriteJson(root / "manifest.json", corpus::CorpusToJson(c));
  std::error_code ec;
  fs::remove(root / "splits.json", ec);
  try {
    corpus::SplitSpec spec = SplitSpecOf(config);
    corpus::Splits splits = corpus::Split(c, spec);
    WriteJson(root / "splits.json", corpus::SplitsToJson(splits, spec));
  } catch (const PreconditionError& e) {
    if (warnings) warnings->push_back(std::string("no splits: ") + e.what());
  }
  WriteFileAtomic(root / "config.txt", std::string_view(config.Serialize()));
  nlohmann::ordered_json meta;
  meta["format"] = 1;
  meta["corpus_root"] = abs_corpus.string();
  meta["programs"] = c.programs.size();
  WriteJson(root / "workspace.json", meta);
  return Open(root);
}

Workspace Workspace::Open(const fs::path& root) {
  if (!Exists(root)) {
    throw PreconditionError(root.string() + " is not an ingested workspace");
  }
  Workspace ws;
  ws.root_ = root;
  ws.Load();
  return ws;
}

void Workspace::Load() {
  auto meta = ParseJsonFile(root_ / "workspace.json");
  corpus_root_ = meta.value("corpus_root", std::string());
  snapshot_ = Config();
  snapshot_.MergeFile(root_ / "config.txt");
  corpus_ = corpus::CorpusFromJson(ParseJsonFile(root_ / "manifest.json"));
  for (auto& p : corpus_.programs) {
    p.source = ReadFileText(ProgramDir(p.id) / SourceFileName(p.language));
  }
  splits_.reset();
  std::error_code ec;
  if (fs::is_regular_file(root_ / "splits.json", ec)) {
    splits_ = corpus::SplitsFromJson(ParseJsonFile(root_ / "splits.json"));
  }
}

Config Workspace::Effective(const Overrides& overrides) const {
  Config c = snapshot_.With(overrides);
  auto diff = snapshot_.FrozenDiff(c);
  if (!diff.empty()) {
    std::string keys;
    for (const auto& k : diff) {
      keys += (keys.empty() ? "" : ", ") + k + " (snapshot: '" + snapshot_.Get(k) +
              "', requested: '" + c.Get(k) + "')";
    }
    throw PreconditionError("frozen by the workspace snapshot: " + keys);
  }
  c.Validate();
  return c;
}

fs::path Workspace::ProgramDir(std::string_view program_id) const {
  return root_ / "programs" / SafePathComponent(program_id);
}

ProgramState Workspace::LoadState(std::string_view program_id) const {
  fs::path path = ProgramDir(program_id) / "state.json";
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    ProgramState st;
    st.program_id = std::string(program_id);
    return st;
  }
  return ProgramState::FromJson(ParseJsonFile(path));
}

void Workspace::SaveState(const ProgramState& state) const {
  WriteJson(ProgramDir(state.program_id) / "state.json", state.ToJson());
}

}  // namespace fuzztune::pipeline
