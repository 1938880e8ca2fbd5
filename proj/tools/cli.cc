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

#include "cli.h"

#include <cstdio>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "fuzztune/common/errors.h"
#include "fuzztune/common/fs_util.h"
#include "fuzztune/common/rng.h"
#include "fuzztune/corpus/split.h"
#include "fuzztune/eval/eval.h"
#include "fuzztune/pipeline/pipeline.h"

namespace fuzztune::cli {
namespace {

namespace pl = pipeline;

// Flags shared by the stage commands. Unset options add no override.
struct Settings {
  std::string workspace;
  std::string config_file;
  std::vector<std::string> sets;
  std::vector<std::pair<std::string, std::optional<std::string>>> flags;
  bool blind = false;
  bool quiet = false;

  pl::Overrides Collect() const {
    pl::Overrides o;
    if (!config_file.empty()) {
      std::string text;
      try {
        text = ReadFileText(config_file);
      } catch (const Error&) {
        throw PreconditionError("cannot read config file " + config_file);
      }
      o = pl::Config::ReadOverrides(text, config_file);
    }
    for (const auto& s : sets) {
      size_t eq = s.find('=');
      if (eq == std::string::npos) throw PreconditionError("--set expects KEY=VALUE, got " + s);
      pl::Config::Info(s.substr(0, eq));
      o.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& [key, value] : flags) {
      if (value) o.emplace_back(key, *value);
    }
    if (blind) o.emplace_back("fuzz.coverage_guided", "false");
    return o;
  }
};

struct FlagSpec {
  const char* flag;
  const char* key;
};

constexpr FlagSpec kFlags[] = {
    {"--seed", "seed"},
    {"--layout", "layout"},
    {"--task", "task"},
    {"--split", "split"},
    {"--workers", "workers"},
    {"--max-rounds", "repair.max_rounds"},
    {"-K,--budget-minutes", "fuzz.budget_minutes"},
    {"--exec-timeout-ms", "fuzz.exec_timeout_ms"},
    {"--max-input-len", "fuzz.max_input_len"},
    {"--havoc-iterations", "fuzz.havoc_iterations"},
    {"--idle-havoc", "fuzz.exhaust_idle_havoc"},
    {"--max-execs", "fuzz.max_execs"},
    {"--max-pairs", "harvest.max_pairs"},
    {"--max-pair-chars", "harvest.max_pair_chars"},
    {"--decode-mode", "harvest.decode_mode"},
    {"--template", "prompt.template"},
    {"--sep-token", "prompt.sep_token"},
    {"--max-units", "prompt.max_total_units"},
    {"--code-fraction", "prompt.code_fraction"},
    {"--ratio", "subsample.ratio"},
    {"--unit", "subsample.unit"},
    {"--failure-threshold", "failure_threshold"},
};

void AddSettings(CLI::App* cmd, Settings& s) {
  cmd->add_option("-w,--workspace", s.workspace, "workspace directory")->required();
  cmd->add_option("-c,--config", s.config_file, "key = value settings file");
  cmd->add_option("--set", s.sets, "KEY=VALUE setting (repeatable)");
  cmd->add_flag("--blind", s.blind, "coverage-blind fuzzing (ablation)");
  cmd->add_flag("-q,--quiet", s.quiet, "no per-program progress lines");
  s.flags.reserve(std::size(kFlags));
  for (const auto& f : kFlags) {
    s.flags.emplace_back(f.key, std::nullopt);
    cmd->add_option(f.flag, s.flags.back().second,
                    std::string(pl::Config::Info(f.key).help) + " [" + f.key + "]");
  }
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

void PrintStats(std::ostream& out, const pl::RunStats& s) {
  out << "programs " << s.programs << "  compiled " << s.compiled << " ("
      << Fmt(s.CompiledPct()) << "%)  fuzzed " << s.fuzzed << " (" << Fmt(s.FuzzedPct())
      << "%)  mean queue " << Fmt(s.mean_queue_size) << "  pairs/program "
      << Fmt(s.PairsPerProgram()) << "  failed " << s.failed << "\n";
}

int Finish(std::ostream& out, const pl::RunStats& s, const pl::Config& config) {
  PrintStats(out, s);
  if (s.cancelled) return kExitInterrupted;
  if (s.FailedFraction() > config.GetReal("failure_threshold")) return kExitPartial;
  return kExitOk;
}

int StageCommand(const Settings& s, pl::Stage until, const std::string& out_dir,
                 bool retry, std::ostream& out, std::ostream& err,
                 std::atomic<bool>* cancel) {
  pl::Workspace ws = pl::Workspace::Open(s.workspace);
  pl::Config config = ws.Effective(s.Collect());
  pl::RunOptions opt;
  opt.until = until;
  opt.out_dir = out_dir;
  opt.retry_failed = retry;
  opt.cancel = cancel;
  if (!s.quiet) opt.log = [&err](const std::string& line) { err << line << "\n"; };
  pl::RunStats stats = pl::Run(ws, config, opt);
  if (until == pl::Stage::kEmitted && !stats.cancelled) {
    fs::path dir = out_dir.empty() ? ws.root() / "out" : fs::path(out_dir);
    out << "wrote " << stats.records << " records to " << (dir / "dataset.jsonl").string()
        << "\n";
  }
  return Finish(out, stats, config);
}

int Ingest(const Settings& s, const std::string& corpus_root, std::ostream& out,
           std::ostream& err) {
  std::vector<std::string> warnings;
  pl::Workspace ws = pl::Workspace::Ingest(s.workspace, corpus_root, s.Collect(), &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  out << "workspace " << ws.root().string() << ": " << ws.corpus().programs.size()
      << " programs in " << ws.corpus().ProblemIds().size() << " problems";
  if (ws.splits()) {
    out << "; splits " << ws.splits()->train.size() << "/" << ws.splits()->val.size() << "/"
        << ws.splits()->test.size();
  }
  out << "\n";
  return kExitOk;
}

int Subsample(const Settings& s, const std::string& out_file, std::ostream& out) {
  pl::Workspace ws = pl::Workspace::Open(s.workspace);
  pl::Config config = ws.Effective(s.Collect());
  std::optional<corpus::Splits> splits;
  pl::ActiveProgramIds(ws, config, &splits);
  if (!splits) throw PreconditionError("workspace has no splits to subsample");
  auto j = corpus::SplitsToJson(*splits, pl::SplitSpecOf(config));
  j["subsample"] = {{"ratio", config.GetFraction("subsample.ratio").ToString()},
                    {"unit", config.Get("subsample.unit")}};
  fs::path path = out_file.empty() ? ws.root() / "splits.subsample.json" : fs::path(out_file);
  WriteFileAtomic(path, std::string_view(j.dump(2) + "\n"));
  out << "train " << splits->train.size() << "  val " << splits->val.size() << "  test "
      << splits->test.size() << "  -> " << path.string() << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string embeddings;
  std::string splits;
  std::string predictions;
  std::string similarity = "cosine";
  std::string out_dir;
  unsigned threads = 1;
};

int Eval(const EvalArgs& a, std::ostream& out) {
  if (a.embeddings.empty() && a.predictions.empty()) {
    throw PreconditionError("eval needs --embeddings and/or --predictions");
  }
  fs::path dir = a.out_dir.empty() ? fs::path(".") : fs::path(a.out_dir);
  nlohmann::ordered_json metrics;
  if (!a.embeddings.empty()) {
    eval::EmbeddingTable table = eval::ReadEmbeddings(a.embeddings);
    if (!a.splits.empty()) {
      auto j = nlohmann::ordered_json::parse(ReadFileText(a.splits));
      table = eval::Restrict(table, corpus::SplitsFromJson(j).test);
    }
    eval::EvalReport r = eval::MapAtR(table, eval::ParseSimilarity(a.similarity), a.threads);
    metrics["clone_detection"] = eval::ReportToJson(r);
    WriteFileAtomic(dir / "per_problem.csv", std::string_view(eval::PerProblemCsv(r)));
    WriteFileAtomic(dir / "per_problem_series.json",
                    std::string_view(eval::PerProblemSeries(r).dump(2) + "\n"));
    out << "MAP@R " << r.map_at_r << " over " << r.n_queries << " queries\n";
  }
  if (!a.predictions.empty()) {
    eval::Predictions p = eval::ReadPredictions(a.predictions);
    double e = eval::ErrorRate(p.predictions, p.labels);
    metrics["classification"] = {{"error_rate", e}, {"n", p.ids.size()}};
    out << "error rate " << e << " over " << p.ids.size() << " programs\n";
  }
  WriteFileAtomic(dir / "metrics.json", std::string_view(metrics.dump(2) + "\n"));
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
           std::atomic<bool>* cancel) {
  CLI::App app{"Fuzzing-based augmentation of program corpora", "fuzztune"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // One Settings per command; options bind to its members.
  std::vector<std::unique_ptr<Settings>> owned;
  auto settings_for = [&](CLI::App* cmd) -> Settings& {
    owned.push_back(std::make_unique<Settings>());
    AddSettings(cmd, *owned.back());
    return *owned.back();
  };
  std::string corpus_root;
  std::string out_dir;
  bool retry = false;

  auto* ingest = app.add_subcommand("ingest", "read a corpus into a new workspace");
  Settings& ingest_s = settings_for(ingest);
  ingest->add_option("--corpus", corpus_root, "corpus root directory")->required();

  struct StageCmd {
    const char* name;
    const char* help;
    pl::Stage until;
    CLI::App* app = nullptr;
    Settings* settings = nullptr;
  };
  StageCmd stages[] = {
      {"repair", "repair build errors", pl::Stage::kRepaired},
      {"build", "compile instrumented and plain binaries", pl::Stage::kBuilt},
      {"fuzz", "run one campaign per program", pl::Stage::kFuzzed},
      {"harvest", "replay queues into input/output pairs", pl::Stage::kHarvested},
      {"emit", "render prompts and write the dataset", pl::Stage::kEmitted},
  };
  for (auto& st : stages) {
    st.app = app.add_subcommand(st.name, std::string(st.help) +
                                             " (earlier stages run as needed)");
    st.settings = &settings_for(st.app);
    st.app->add_flag("--retry-failed", retry, "retry programs that failed before");
    if (st.until == pl::Stage::kEmitted) {
      st.app->add_option("-o,--out", out_dir, "output directory (default <workspace>/out)");
    }
  }

  auto* pipeline = app.add_subcommand("pipeline", "ingest (if needed) through emit");
  Settings& pipeline_s = settings_for(pipeline);
  pipeline->add_option("--corpus", corpus_root, "corpus to ingest when the workspace is new");
  pipeline->add_option("-o,--out", out_dir, "output directory (default <workspace>/out)");
  pipeline->add_flag("--retry-failed", retry, "retry programs that failed before");

  auto* subsample = app.add_subcommand("subsample", "write a subsampled splits manifest");
  Settings& subsample_s = settings_for(subsample);
  subsample->add_option("-o,--out", out_dir, "manifest path");

  EvalArgs ea;
  auto* ev = app.add_subcommand("eval", "MAP@R and error rate from tuner outputs");
  ev->add_option("--embeddings", ea.embeddings, "embedding table (n dim header)");
  ev->add_option("--splits", ea.splits, "splits manifest; restricts retrieval to test ids");
  ev->add_option("--predictions", ea.predictions, "id,prediction,label CSV");
  ev->add_option("--similarity", ea.similarity, "cosine or dot");
  ev->add_option("--threads", ea.threads, "query threads");
  ev->add_option("-o,--out", ea.out_dir, "report directory");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (!app.get_subcommands().empty()) {
      err << app.get_subcommands().front()->help();
    } else {
      err << app.help();
    }
    return kExitUsage;
  }

  try {
    if (ingest->parsed()) return Ingest(ingest_s, corpus_root, out, err);
    for (const auto& st : stages) {
      if (st.app->parsed()) {
        return StageCommand(*st.settings, st.until, out_dir, retry, out, err, cancel);
      }
    }
    if (pipeline->parsed()) {
      const Settings& s = pipeline_s;
      if (!pl::Workspace::Exists(s.workspace)) {
        if (corpus_root.empty()) {
          throw PreconditionError(s.workspace + " is not a workspace; pass --corpus to create it");
        }
        int rc = Ingest(s, corpus_root, out, err);
        if (rc != kExitOk) return rc;
      } else if (!corpus_root.empty()) {
        Ingest(s, corpus_root, out, err);  // checks it is the same corpus
      }
      return StageCommand(s, pl::Stage::kEmitted, out_dir, retry, out, err, cancel);
    }
    if (subsample->parsed()) return Subsample(subsample_s, out_dir, out);
    if (ev->parsed()) return Eval(ea, out);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const EnvironmentError& e) {
    err << "environment error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const CorpusError& e) {
    err << "corpus error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitEnvironment;
  }
  return kExitUsage;
}

}  // namespace fuzztune::cli
