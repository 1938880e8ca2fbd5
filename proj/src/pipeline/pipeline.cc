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

#include "fuzztune/pipeline/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "fuzztune/common/errors.h"
#include "fuzztune/common/fs_util.h"
#include "fuzztune/common/rng.h"
#include "fuzztune/fuzzer/fuzzer.h"
#include "fuzztune/harvest/harvest.h"
#include "fuzztune/prompt/prompt.h"
#include "fuzztune/repair/repair.h"

namespace fuzztune::pipeline {
namespace {

struct Cancelled {};

template <typename Json>
void WriteJson(const fs::path& path, const Json& j) {
  WriteFileAtomic(path, std::string_view(j.dump(2) + "\n"));
}

nlohmann::ordered_json ReadJson(const fs::path& path) {
  try {
    return nlohmann::ordered_json::parse(ReadFileText(path));
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(path.string() + ": " + e.what());
  }
}

std::string FirstLine(std::string_view text) {
  size_t start = text.find_first_not_of(" \t\r\n");
  if (start == std::string_view::npos) return "";
  text.remove_prefix(start);
  return std::string(text.substr(0, text.find('\n')));
}

std::string HarvestKey(const Config& c) {
  return c.Get("harvest.decode_mode") + "|" + c.Get("harvest.max_pairs") + "|" +
         c.Get("harvest.max_pair_chars");
}

prompt::PromptTemplate TemplateFor(const Config& c, corpus::Language lang) {
  return prompt::PromptTemplate{prompt::ResolveTemplate(c.Get("prompt.template"), lang),
                                c.Get("prompt.sep_token")};
}

std::string EmitKey(const Config& c, corpus::Language lang) {
  return std::string(prompt::TemplateKindName(TemplateFor(c, lang).kind)) + "|" +
         c.Get("prompt.sep_token") + "|" + c.Get("prompt.max_total_units") + "|" +
         c.Get("prompt.code_fraction") + "|" + HarvestKey(c);
}

class Runner {
 public:
  Runner(const Workspace& ws, const Config& cfg, const RunOptions& opt,
         std::atomic<bool>& stop)
      : ws_(ws), cfg_(cfg), opt_(opt), stop_(stop), limits_(LimitsOf(cfg)) {
    Toolchain tc = ToolchainOf(cfg);
    cov_ = opt.instrumented ? opt.instrumented
                            : std::make_shared<target::InstrumentedBackend>(tc);
    plain_ = opt.plain ? opt.plain : std::make_shared<target::PlainBackend>(tc);
  }

  // Returns a one-line summary for the log.
  std::string Process(const corpus::Program& p);

 private:
  bool Stopped() const { return stop_.load() || (opt_.cancel && opt_.cancel->load()); }

  repair::RepairedProgram LoadRepaired(const corpus::Program& p) const;
  std::unique_ptr<target::Target> OpenTarget(const corpus::Program& p,
                                             const ProgramState& st, bool instrumented);

  void Repair(const corpus::Program& p, ProgramState& st);
  void BuildBoth(const corpus::Program& p, ProgramState& st);
  void Fuzz(const corpus::Program& p, ProgramState& st);
  void Harvest(const corpus::Program& p, ProgramState& st);
  void Emit(const corpus::Program& p, ProgramState& st);

  const Workspace& ws_;
  const Config& cfg_;
  const RunOptions& opt_;
  std::atomic<bool>& stop_;
  target::TargetInfo limits_;
  std::shared_ptr<const target::CoverageBackend> cov_;
  std::shared_ptr<const target::CoverageBackend> plain_;
};

std::string RepairedName(corpus::Language lang) {
  return "repaired" + std::string(corpus::SourceExtension(lang));
}

repair::RepairedProgram Runner::LoadRepaired(const corpus::Program& p) const {
  fs::path dir = ws_.ProgramDir(p.id);
  repair::RepairedProgram rp = repair::RepairReportFromJson(ReadJson(dir / "repair.json"));
  rp.final_source = ReadFileText(dir / RepairedName(p.language));
  return rp;
}

void Runner::Repair(const corpus::Program& p, ProgramState& st) {
  fs::path dir = ws_.ProgramDir(p.id);
  auto adapter = repair::MakeAdapter(p.language, ToolchainOf(cfg_), RepairOptionsOf(cfg_));
  repair::RepairedProgram rp =
      repair::RepairLoop(p, *adapter, static_cast<int>(cfg_.GetUint("repair.max_rounds")));
  WriteFileAtomic(dir / RepairedName(p.language), std::string_view(rp.final_source));
  WriteJson(dir / "repair.json", repair::RepairReportToJson(rp));
  st.repair_status = repair::RepairStatusName(rp.status);
  st.repair_rounds = rp.rounds_used;
  if (rp.status != repair::RepairStatus::kCompiles) {
    throw Error("unfixable after " + std::to_string(rp.rounds_used) +
                " rounds: " + FirstLine(rp.last_compiler_output));
  }
}

void Runner::BuildBoth(const corpus::Program& p, ProgramState& st) {
  fs::path dir = ws_.ProgramDir(p.id);
  repair::RepairedProgram rp = LoadRepaired(p);
  try {
    auto cov = target::Build(rp, *cov_, dir / "build-cov", limits_);
    auto plain = target::Build(rp, *plain_, dir / "build-plain", limits_);
    st.cov_binary = cov.binary.empty() ? "" : fs::relative(cov.binary, dir).string();
    st.plain_binary = plain.binary.empty() ? "" : fs::relative(plain.binary, dir).string();
    st.smoke_ok = cov.smoke_ok;
  } catch (const BuildError& e) {
    throw Error(std::string(e.what()) + ": " + FirstLine(e.compiler_output()));
  }
}

std::unique_ptr<target::Target> Runner::OpenTarget(const corpus::Program& p,
                                                   const ProgramState& st,
                                                   bool instrumented) {
  fs::path dir = ws_.ProgramDir(p.id);
  const std::string& rel = instrumented ? st.cov_binary : st.plain_binary;
  std::error_code ec;
  if (!rel.empty() && fs::is_regular_file(dir / rel, ec)) {
    return target::OpenBinary(p.id, dir / rel, instrumented, limits_);
  }
  const auto& backend = instrumented ? *cov_ : *plain_;
  return target::Build(LoadRepaired(p), backend,
                       dir / (instrumented ? "build-cov" : "build-plain"), limits_)
      .target;
}

void Runner::Fuzz(const corpus::Program& p, ProgramState& st) {
  fs::path dir = ws_.ProgramDir(p.id);
  auto t = OpenTarget(p, st, true);
  fuzzer::FuzzHooks hooks;
  hooks.on_exec = [this](ByteView, const target::ExecResult&, fuzzer::Stage,
                         const fuzzer::CoverageAccumulator&) {
    if (Stopped()) throw Cancelled{};
  };
  fuzzer::FuzzReport report = fuzzer::FuzzProgram(*t, {}, FuzzConfigOf(cfg_, p.id), hooks);
  std::error_code ec;
  fs::remove_all(dir / "campaign", ec);
  fuzzer::WriteCampaign(report, dir / "campaign");
  st.termination = fuzzer::TerminationName(report.stats.termination);
  st.execs = report.stats.execs_total;
  st.edges = report.stats.edges_covered;
  st.queue_size = report.queue.size();
  st.crashes = report.stats.crashes_total;
  st.hangs = report.stats.hangs_total;
  if (report.stats.termination == fuzzer::Termination::kAborted) {
    throw Error("campaign aborted: " + report.stats.abort_reason);
  }
}

void Runner::Harvest(const corpus::Program& p, ProgramState& st) {
  fs::path dir = ws_.ProgramDir(p.id);
  auto t = OpenTarget(p, st, false);
  fuzzer::FuzzReport report = fuzzer::ReadCampaign(dir / "campaign");
  harvest::HarvestStats hs;
  auto pairs = harvest::HarvestCampaign(*t, report, HarvestLimitsOf(cfg_),
                                        DecodeModeOf(cfg_), &hs);
  harvest::WriteTestcases(dir / "testcases.jsonl", p.id, pairs);
  if (opt_.log) {
    for (const auto& m : hs.messages) opt_.log("warning: replay error: " + m);
  }
  st.n_pairs = pairs.size();
  st.harvest_key = HarvestKey(cfg_);
}

void Runner::Emit(const corpus::Program& p, ProgramState& st) {
  fs::path dir = ws_.ProgramDir(p.id);
  auto pairs = harvest::ReadTestcases(dir / "testcases.jsonl");
  auto rec = prompt::BuildRecord(p, pairs, TemplateFor(cfg_, p.language), BudgetOf(cfg_));
  WriteJson(dir / "record.json", prompt::RecordToJson(rec));
  st.emit_key = EmitKey(cfg_, p.language);
}

std::string Runner::Process(const corpus::Program& p) {
  ProgramState st = ws_.LoadState(p.id);
  if (st.failed()) {
    if (!opt_.retry_failed) return "failed earlier at " + st.failed_step + " (skipped)";
    st.failed_step.clear();
    st.error.clear();
  }
  if (st.stage >= Stage::kHarvested && st.harvest_key != HarvestKey(cfg_)) {
    st.stage = Stage::kFuzzed;
  }
  if (st.stage >= Stage::kEmitted && st.emit_key != EmitKey(cfg_, p.language)) {
    st.stage = Stage::kHarvested;
  }

  struct Step {
    Stage stage;
    const char* name;
    void (Runner::*fn)(const corpus::Program&, ProgramState&);
  };
  static constexpr Step kSteps[] = {
      {Stage::kRepaired, "repair", &Runner::Repair},
      {Stage::kBuilt, "build", &Runner::BuildBoth},
      {Stage::kFuzzed, "fuzz", &Runner::Fuzz},
      {Stage::kHarvested, "harvest", &Runner::Harvest},
      {Stage::kEmitted, "emit", &Runner::Emit},
  };
  for (const Step& step : kSteps) {
    if (step.stage <= st.stage) continue;
    if (step.stage > opt_.until) break;
    if (Stopped()) throw Cancelled{};
    try {
      (this->*step.fn)(p, st);
    } catch (const Cancelled&) {
      throw;
    } catch (const EnvironmentError&) {
      throw;
    } catch (const std::exception& e) {
      st.failed_step = step.name;
      st.error = e.what();
      ws_.SaveState(st);
      return std::string("failed at ") + step.name + ": " + st.error;
    }
    st.stage = step.stage;
    ws_.SaveState(st);
  }
  std::string summary(StageName(st.stage));
  if (st.stage >= Stage::kFuzzed) {
    summary += ", queue " + std::to_string(st.queue_size) + ", " +
               std::to_string(st.execs) + " execs, " + st.termination;
  }
  if (st.stage >= Stage::kHarvested) summary += ", " + std::to_string(st.n_pairs) + " pairs";
  return summary;
}

double Pct(size_t a, size_t b) { return b == 0 ? 0.0 : 100.0 * a / b; }

}  // namespace

double RunStats::CompiledPct() const { return Pct(compiled, programs); }
double RunStats::FuzzedPct() const { return Pct(fuzzed, compiled); }
double RunStats::PairsPerProgram() const {
  return fuzzed == 0 ? 0.0 : static_cast<double>(total_pairs) / fuzzed;
}
double RunStats::WithPairsPct() const { return Pct(programs_with_pairs, fuzzed); }
double RunStats::FailedFraction() const {
  return programs == 0 ? 0.0 : static_cast<double>(failed) / programs;
}

nlohmann::ordered_json RunStats::ToJson() const {
  nlohmann::ordered_json j;
  j["programs"] = programs;
  j["compiled"] = compiled;
  j["compiled_pct"] = CompiledPct();
  j["built"] = built;
  j["fuzzed"] = fuzzed;
  j["fuzzed_pct"] = FuzzedPct();
  j["mean_queue_size"] = mean_queue_size;
  j["total_pairs"] = total_pairs;
  j["pairs_per_program"] = PairsPerProgram();
  j["programs_with_pairs"] = programs_with_pairs;
  j["programs_with_pairs_pct"] = WithPairsPct();
  j["failed"] = failed;
  j["failed_by_step"] = failed_by_step;
  j["terminations"] = terminations;
  j["records"] = records;
  j["cancelled"] = cancelled;
  return j;
}

std::vector<std::string> ActiveProgramIds(const Workspace& ws, const Config& config,
                                          std::optional<corpus::Splits>* splits) {
  std::optional<corpus::Splits> active = ws.splits();
  Rational ratio = config.GetFraction("subsample.ratio");
  if (ratio != Rational(1)) {
    if (!active) {
      throw PreconditionError("subsampling needs splits, and this workspace has none");
    }
    active = corpus::Subsample(ws.corpus(), *active, ratio,
                               corpus::ParseSplitUnit(config.Get("subsample.unit")),
                               DeriveSeed(config.GetUint("seed"), "subsample"));
  }
  if (splits) *splits = active;
  std::vector<std::string> ids;
  if (ratio == Rational(1)) {
    for (const auto& p : ws.corpus().programs) ids.push_back(p.id);
    return ids;
  }
  std::unordered_map<std::string, bool> keep;
  for (const auto* list : {&active->train, &active->val, &active->test}) {
    for (const auto& id : *list) keep[id] = true;
  }
  for (const auto& p : ws.corpus().programs) {
    if (keep.count(p.id)) ids.push_back(p.id);
  }
  return ids;
}

RunStats CollectStats(const Workspace& ws, const Config& config) {
  RunStats s;
  size_t queue_total = 0;
  for (const auto& id : ActiveProgramIds(ws, config)) {
    ProgramState st = ws.LoadState(id);
    ++s.programs;
    if (st.repair_status == "compiles") ++s.compiled;
    if (st.stage >= Stage::kBuilt) ++s.built;
    if (st.stage >= Stage::kFuzzed) {
      ++s.fuzzed;
      queue_total += st.queue_size;
      ++s.terminations[st.termination];
    }
    if (st.stage >= Stage::kHarvested) {
      s.total_pairs += st.n_pairs;
      if (st.n_pairs > 0) ++s.programs_with_pairs;
    }
    if (st.failed()) {
      ++s.failed;
      ++s.failed_by_step[st.failed_step];
    }
  }
  s.mean_queue_size = s.fuzzed == 0 ? 0.0 : static_cast<double>(queue_total) / s.fuzzed;
  return s;
}

RunStats Run(const Workspace& ws, const Config& config, const RunOptions& options) {
  config.Validate();
  if (auto diff = ws.snapshot().FrozenDiff(config); !diff.empty()) {
    throw PreconditionError("configuration changes frozen key " + diff.front());
  }
  std::optional<corpus::Splits> splits;
  const std::vector<std::string> ids = ActiveProgramIds(ws, config, &splits);
  std::vector<const corpus::Program*> programs;
  for (const auto& id : ids) programs.push_back(ws.corpus().Find(id));

  std::atomic<bool> stop{false};
  Runner runner(ws, config, options, stop);
  std::atomic<size_t> next{0};
  std::atomic<size_t> done{0};
  std::mutex mu;
  std::exception_ptr env_error;
  bool cancelled = false;

  auto log = [&](const std::string& line) {
    if (!options.log) return;
    std::lock_guard<std::mutex> lock(mu);
    options.log(line);
  };
  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= programs.size()) return;
      const corpus::Program& p = *programs[i];
      try {
        std::string summary = runner.Process(p);
        log("[" + std::to_string(done.fetch_add(1) + 1) + "/" +
            std::to_string(programs.size()) + "] " + p.id + ": " + summary);
      } catch (const Cancelled&) {
        std::lock_guard<std::mutex> lock(mu);
        cancelled = true;
        return;
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!env_error) env_error = std::current_exception();
        stop = true;
        return;
      }
    }
  };

  unsigned workers = static_cast<unsigned>(config.GetUint("workers"));
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<size_t>(workers, std::max<size_t>(1, programs.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (env_error) std::rethrow_exception(env_error);
  if (options.cancel && options.cancel->load()) cancelled = true;

  RunStats stats = CollectStats(ws, config);
  stats.cancelled = cancelled;
  if (cancelled || options.until != Stage::kEmitted) return stats;

  // Dataset assembly in corpus order, independent of the worker schedule.
  std::unordered_map<std::string, std::string> tags;
  if (splits) {
    for (const auto& [list, tag] : {std::pair{&splits->train, "train"},
                                    std::pair{&splits->val, "val"},
                                    std::pair{&splits->test, "test"}}) {
      for (const auto& id : *list) tags[id] = tag;
    }
  }
  std::vector<prompt::AugmentedRecord> records;
  for (const corpus::Program* p : programs) {
    ProgramState st = ws.LoadState(p->id);
    prompt::AugmentedRecord rec;
    if (st.stage >= Stage::kEmitted && st.emit_key == EmitKey(config, p->language)) {
      rec = prompt::RecordFromJson(ReadJson(ws.ProgramDir(p->id) / "record.json"));
    } else {
      // Programs that never reached emit keep their source, with no pairs.
      rec = prompt::BuildRecord(*p, {}, TemplateFor(config, p->language), BudgetOf(config));
    }
    rec.split_tag = tags.count(p->id) ? tags[p->id] : "";
    records.push_back(std::move(rec));
  }
  stats.records = records.size();

  fs::path out = options.out_dir.empty() ? ws.root() / "out" : options.out_dir;
  fs::create_directories(out);
  prompt::WriteDataset(out / "dataset.jsonl", records);
  std::error_code ec;
  fs::remove(out / "splits.json", ec);
  if (splits) {
    auto j = corpus::SplitsToJson(*splits, SplitSpecOf(config));
    j["subsample"] = {{"ratio", config.GetFraction("subsample.ratio").ToString()},
                      {"unit", config.Get("subsample.unit")}};
    WriteJson(out / "splits.json", j);
  }
  WriteJson(out / "stats.json", stats.ToJson());
  WriteFileAtomic(out / "config.txt", std::string_view(config.Serialize()));
  return stats;
}

}  // namespace fuzztune::pipeline
