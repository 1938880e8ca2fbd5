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

#include "fuzztune/fuzzer/fuzzer.h"

#include <cmath>
#include <cstdio>
#include <set>

#include "fuzztune/common/errors.h"
#include "fuzztune/common/fs_util.h"
#include "fuzztune/common/rng.h"

namespace fuzztune::fuzzer {
namespace {

using Clock = std::chrono::steady_clock;
using target::ExecResult;
using target::ExecStatus;

// Thrown inside the campaign to unwind out of stage enumeration.
struct Stop {};

class Campaign {
 public:
  Campaign(target::Target& target, const FuzzConfig& config, const FuzzHooks& hooks)
      : target_(target),
        config_(config),
        hooks_(hooks),
        mutator_(config.max_input_len),
        rng_(DeriveSeed(config.rng_seed, "fuzz")),
        start_(Clock::now()),
        deadline_(start_ + config.Budget()) {}

  FuzzReport Run(std::vector<Bytes> seeds) {
    try {
      for (auto& seed : seeds) {
        if (seed.size() > config_.max_input_len) seed.resize(config_.max_input_len);
        Execute(seed, Stage::kSeed, std::nullopt);
      }
      MainLoop();
    } catch (const Stop&) {
    } catch (const ExecError& e) {
      report_.stats.termination = Termination::kAborted;
      report_.stats.partial = true;
      report_.stats.abort_reason = e.what();
    }
    report_.stats.wall_time_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    report_.stats.edges_covered = EdgesOf(report_.queue);
    return std::move(report_);
  }

 private:
  void Finish(Termination t) {
    report_.stats.termination = t;
    throw Stop{};
  }

  void MainLoop() {
    size_t cursor = 0;
    while (true) {
      if (report_.queue.empty()) Finish(Termination::kExhausted);
      if (cursor >= report_.queue.size()) cursor = 0;
      if (det_done_.size() < report_.queue.size()) det_done_.resize(report_.queue.size(), false);
      if (!det_done_[cursor]) {
        // Copy: the queue may grow (and reallocate) while we enumerate.
        const Bytes input = report_.queue[cursor].input;
        const std::uint64_t id = report_.queue[cursor].id;
        for (Stage stage : {Stage::kBitflip, Stage::kArith, Stage::kInterest}) {
          mutator_.ForEachVariant(stage, input, [&](ByteView v) {
            Execute(v, stage, id);
            return true;
          });
        }
        det_done_[cursor] = true;
        ++det_complete_;
      }
      RandomBatch(cursor);
      ++cursor;
    }
  }

  void RandomBatch(size_t cursor) {
    const int n = std::max(1, config_.havoc_iterations_per_entry);
    for (int i = 0; i < n; ++i) {
      const QueueEntry& entry = report_.queue[cursor];
      const std::uint64_t id = entry.id;
      Bytes variant;
      Stage stage = Stage::kHavoc;
      // Every fourth iteration splices when another entry exists.
      if (report_.queue.size() >= 2 && i % 4 == 3) {
        size_t other = rng_.Below(report_.queue.size() - 1);
        if (other >= cursor) ++other;
        variant = mutator_.Splice(entry.input, report_.queue[other].input, rng_);
        stage = Stage::kSplice;
      } else {
        variant = mutator_.Havoc(entry.input, rng_);
      }
      bool found = Execute(variant, stage, id);
      idle_ = found ? 0 : idle_ + 1;
      if (config_.exhaust_idle_havoc > 0 && idle_ >= config_.exhaust_idle_havoc &&
          det_complete_ == report_.queue.size()) {
        Finish(Termination::kExhausted);
      }
    }
  }

  void RunOnce(ByteView input, ExecResult& out) {
    if (Clock::now() >= deadline_) Finish(Termination::kTimeout);
    if (config_.max_execs > 0 && report_.stats.execs_total >= config_.max_execs) {
      Finish(Termination::kExecLimit);
    }
    target_.Execute(input, out);
    ++report_.stats.execs_total;
  }

  // Returns true when the input was enqueued.
  bool Execute(ByteView input, Stage stage, std::optional<std::uint64_t> parent) {
    RunOnce(input, result_);
    if (hooks_.on_exec) hooks_.on_exec(input, result_, stage, global_);
    switch (result_.status) {
      case ExecStatus::kCrash:
        ++report_.stats.crashes_total;
        SaveFault(input, crash_seen_, report_.crashes, config_.max_saved_crashes);
        return false;
      case ExecStatus::kHang:
        ++report_.stats.hangs_total;
        SaveFault(input, hang_seen_, report_.hangs, config_.max_saved_hangs);
        return false;
      case ExecStatus::kOk:
        break;
    }
    const bool seed = stage == Stage::kSeed;
    if (!config_.coverage_guided && !seed) return false;
    const bool novel = global_.HasNew(result_.coverage);
    if (!novel && !(seed && report_.queue.empty())) return false;

    Signature sig = result_.coverage.ToSignature();
    const double exec_ms = result_.exec_time_ms;
    bool unstable = false;
    if (novel) {
      Bytes copy(input.begin(), input.end());
      std::vector<Signature> runs = {sig};
      global_.Merge(result_.coverage);
      for (int k = 0; k < config_.stability_retries; ++k) {
        RunOnce(copy, calibration_);
        Signature again = calibration_.status == ExecStatus::kOk
                              ? calibration_.coverage.ToSignature()
                              : Signature{};
        if (calibration_.status == ExecStatus::kOk) global_.Merge(calibration_.coverage);
        if (again == runs.front() && !unstable) break;
        unstable = true;
        runs.push_back(std::move(again));
      }
      if (unstable) {
        sig = IntersectSignatures(runs);
        ++report_.stats.unstable_entries;
      }
      if (!seed || !report_.queue.empty()) {
        // The stable part must itself be new to keep signatures distinct.
        if (!entry_pairs_.HasNew(sig)) return false;
      }
    }
    QueueEntry e;
    e.id = report_.queue.size();
    e.input.assign(input.begin(), input.end());
    e.signature = std::move(sig);
    e.exec_time_ms = exec_ms;
    if (!seed) e.parent = parent;
    e.stage_found = stage;
    entry_pairs_.Merge(e.signature);
    report_.queue.push_back(std::move(e));
    if (hooks_.on_enqueue) hooks_.on_enqueue(report_.queue.back(), global_);
    return true;
  }

  void SaveFault(ByteView input, CoverageAccumulator& seen, std::vector<Bytes>& out,
                 size_t cap) {
    bool fresh = seen.HasNew(result_.coverage) || (out.empty() && result_.coverage.Empty());
    if (!fresh || out.size() >= cap) return;
    seen.Merge(result_.coverage);
    out.emplace_back(input.begin(), input.end());
  }

  target::Target& target_;
  const FuzzConfig& config_;
  const FuzzHooks& hooks_;
  Mutator mutator_;
  Rng rng_;
  Clock::time_point start_;
  Clock::time_point deadline_;

  FuzzReport report_;
  CoverageAccumulator global_;
  CoverageAccumulator entry_pairs_;  // union of queue signatures
  CoverageAccumulator crash_seen_;
  CoverageAccumulator hang_seen_;
  std::vector<bool> det_done_;
  size_t det_complete_ = 0;
  std::uint64_t idle_ = 0;
  ExecResult result_;
  ExecResult calibration_;
};

std::string EntryName(size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "id_%06zu", i);
  return buf;
}

nlohmann::json SignatureToJson(const Signature& sig) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& e : sig) a.push_back({e.edge, e.bucket});
  return a;
}

Signature SignatureFromJson(const nlohmann::json& j) {
  Signature sig;
  for (const auto& p : j) {
    sig.push_back({p.at(0).get<std::uint16_t>(), p.at(1).get<std::uint8_t>()});
  }
  return sig;
}

void WriteInputs(const std::vector<Bytes>& inputs, const fs::path& dir) {
  fs::create_directories(dir);
  for (size_t i = 0; i < inputs.size(); ++i) WriteFileAtomic(dir / EntryName(i), inputs[i]);
}

std::vector<Bytes> ReadInputs(const fs::path& dir, size_t count) {
  std::vector<Bytes> out;
  for (size_t i = 0; i < count; ++i) out.push_back(ReadFileBytes(dir / EntryName(i)));
  return out;
}

}  // namespace

void FuzzConfig::Validate() const {
  if (!(budget_minutes > 0) || !std::isfinite(budget_minutes)) {
    throw PreconditionError("budget_minutes must be > 0");
  }
  if (max_input_len < 1) throw PreconditionError("max_input_len must be >= 1");
  if (per_exec_timeout.count() <= 0) throw PreconditionError("per_exec_timeout must be > 0");
  if (havoc_iterations_per_entry < 1) {
    throw PreconditionError("havoc_iterations_per_entry must be >= 1");
  }
  if (stability_retries < 0) throw PreconditionError("stability_retries must be >= 0");
}

std::chrono::milliseconds FuzzConfig::Budget() const {
  return std::chrono::milliseconds(
      static_cast<std::int64_t>(std::llround(budget_minutes * 60000.0)));
}

std::string_view TerminationName(Termination t) {
  switch (t) {
    case Termination::kExhausted: return "exhausted";
    case Termination::kTimeout: return "timeout";
    case Termination::kExecLimit: return "exec_limit";
    case Termination::kAborted: return "aborted";
  }
  return "aborted";
}

Termination ParseTermination(std::string_view name) {
  for (Termination t : {Termination::kExhausted, Termination::kTimeout,
                        Termination::kExecLimit, Termination::kAborted}) {
    if (TerminationName(t) == name) return t;
  }
  throw PreconditionError("unknown termination '" + std::string(name) + "'");
}

Bytes DefaultSeed() { return Bytes{'\n'}; }

FuzzReport FuzzProgram(target::Target& target, std::vector<Bytes> seeds,
                       const FuzzConfig& config, const FuzzHooks& hooks) {
  config.Validate();
  if (seeds.empty()) seeds.push_back(DefaultSeed());
  if (target.info().max_input_len < config.max_input_len) {
    throw PreconditionError("target accepts shorter inputs than max_input_len");
  }
  target.set_timeout(config.per_exec_timeout);
  return Campaign(target, config, hooks).Run(std::move(seeds));
}

size_t EdgesOf(const std::vector<QueueEntry>& queue) {
  std::vector<bool> seen(kMapSize, false);
  size_t n = 0;
  for (const auto& e : queue) {
    for (const auto& p : e.signature) {
      if (!seen[p.edge]) {
        seen[p.edge] = true;
        ++n;
      }
    }
  }
  return n;
}

nlohmann::json StatsToJson(const FuzzStats& s) {
  return {{"execs_total", s.execs_total},
          {"edges_covered", s.edges_covered},
          {"wall_time_ms", s.wall_time_ms},
          {"termination", TerminationName(s.termination)},
          {"partial", s.partial},
          {"abort_reason", s.abort_reason},
          {"crashes_total", s.crashes_total},
          {"hangs_total", s.hangs_total},
          {"unstable_entries", s.unstable_entries}};
}

void WriteCampaign(const FuzzReport& report, const fs::path& dir) {
  std::vector<Bytes> queue_inputs;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : report.queue) {
    queue_inputs.push_back(e.input);
    nlohmann::json j = {{"id", e.id},
                        {"file", EntryName(queue_inputs.size() - 1)},
                        {"stage_found", StageName(e.stage_found)},
                        {"exec_time_ms", e.exec_time_ms},
                        {"signature", SignatureToJson(e.signature)}};
    j["parent"] = e.parent ? nlohmann::json(*e.parent) : nlohmann::json(nullptr);
    entries.push_back(std::move(j));
  }
  WriteInputs(queue_inputs, dir / "queue");
  WriteInputs(report.crashes, dir / "crashes");
  WriteInputs(report.hangs, dir / "hangs");
  nlohmann::json stats = StatsToJson(report.stats);
  stats["queue"] = std::move(entries);
  stats["crashes"] = report.crashes.size();
  stats["hangs"] = report.hangs.size();
  WriteFileAtomic(dir / "stats.json", stats.dump(2) + "\n");
}

FuzzReport ReadCampaign(const fs::path& dir) {
  auto j = nlohmann::json::parse(ReadFileText(dir / "stats.json"));
  FuzzReport r;
  r.stats.execs_total = j.at("execs_total").get<std::uint64_t>();
  r.stats.edges_covered = j.at("edges_covered").get<size_t>();
  r.stats.wall_time_ms = j.at("wall_time_ms").get<double>();
  r.stats.termination = ParseTermination(j.at("termination").get<std::string>());
  r.stats.partial = j.at("partial").get<bool>();
  r.stats.abort_reason = j.at("abort_reason").get<std::string>();
  r.stats.crashes_total = j.at("crashes_total").get<std::uint64_t>();
  r.stats.hangs_total = j.at("hangs_total").get<std::uint64_t>();
  r.stats.unstable_entries = j.at("unstable_entries").get<std::uint64_t>();
  for (const auto& e : j.at("queue")) {
    QueueEntry q;
    q.id = e.at("id").get<std::uint64_t>();
    q.input = ReadFileBytes(dir / "queue" / e.at("file").get<std::string>());
    q.signature = SignatureFromJson(e.at("signature"));
    q.exec_time_ms = e.at("exec_time_ms").get<double>();
    if (!e.at("parent").is_null()) q.parent = e.at("parent").get<std::uint64_t>();
    q.stage_found = ParseStage(e.at("stage_found").get<std::string>());
    r.queue.push_back(std::move(q));
  }
  r.crashes = ReadInputs(dir / "crashes", j.at("crashes").get<size_t>());
  r.hangs = ReadInputs(dir / "hangs", j.at("hangs").get<size_t>());
  return r;
}

}  // namespace fuzztune::fuzzer
