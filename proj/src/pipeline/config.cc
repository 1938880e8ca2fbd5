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

#include "fuzztune/pipeline/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "fuzztune/common/errors.h"
#include "fuzztune/common/fs_util.h"
#include "fuzztune/common/rng.h"

namespace fuzztune::pipeline {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool ParseUint(std::string_view s, std::uint64_t& out) {
  auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && r.ec == std::errc() && r.ptr == s.data() + s.size();
}

bool ParseReal(std::string_view s, double& out) {
  auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && r.ec == std::errc() && r.ptr == s.data() + s.size() &&
         std::isfinite(out);
}

std::optional<bool> ParseBool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  return std::nullopt;
}

const std::vector<KeyInfo>& KeyTable() {
  using V = ValueType;
  static const std::vector<KeyInfo> keys = {
      {"seed", "0", V::kUint, true, "workspace seed for every random choice"},
      {"layout", "poj104", V::kChoice, true, "corpus layout",
       {"poj104", "java250", "python800", "cpp1000"}},
      {"task", "clone_detection", V::kChoice, true, "downstream task of the splits",
       {"clone_detection", "classification"}},
      {"split", "", V::kText, true,
       "split fractions like 64:16:24 (empty: task and layout default)"},
      {"cxx", "clang++", V::kText, true, "C++ compiler"},
      {"cc", "clang", V::kText, true, "C compiler for the coverage runtime"},
      {"opt_level", "-O1", V::kText, true, "optimization flag for target builds"},
      {"repair.max_rounds", "10", V::kUint, true, "diagnose/fix rounds per program"},
      {"repair.constant_value", "100000", V::kUint, true,
       "value given to undeclared constants"},
      {"fuzz.budget_minutes", "5", V::kReal, true, "campaign budget K in minutes"},
      {"fuzz.exec_timeout_ms", "1000", V::kUint, true, "per-execution hang timeout"},
      {"fuzz.max_input_len", "1048576", V::kUint, true, "largest generated input"},
      {"fuzz.havoc_iterations", "256", V::kUint, true, "havoc executions per queue visit"},
      {"fuzz.exhaust_idle_havoc", "50000", V::kUint, true,
       "fruitless havoc executions that end a campaign (0: never)"},
      {"fuzz.max_execs", "0", V::kUint, true, "execution cap per campaign (0: none)"},
      {"fuzz.coverage_guided", "true", V::kBool, true,
       "false runs the coverage-blind ablation"},
      {"exec.memory_limit_mb", "512", V::kUint, true, "address-space limit of targets"},
      {"exec.stdout_cap", "65536", V::kUint, true, "captured stdout bytes per run"},
      {"harvest.max_pairs", "5", V::kUint, false, "pairs kept per program"},
      {"harvest.max_pair_chars", "200", V::kUint, false,
       "input plus output code points per pair"},
      {"harvest.decode_mode", "utf8", V::kChoice, false, "pair text rendering",
       {"utf8", "raw_bytes"}},
      {"prompt.template", "pl_auto", V::kChoice, false, "cloze template",
       {"none", "nl_a", "nl_b", "pl_cpp", "pl_java", "pl_python", "pl_auto"}},
      {"prompt.sep_token", "[SEP]", V::kText, false, "separator before each pair"},
      {"prompt.max_total_units", "16384", V::kUint, false, "record length budget"},
      {"prompt.code_fraction", "0.75", V::kReal, false,
       "budget share the source keeps against pairs"},
      {"subsample.ratio", "1", V::kFraction, false,
       "share of train/val kept, e.g. 0.1 or 10%"},
      {"subsample.unit", "programs", V::kChoice, false, "what subsampling draws",
       {"problems", "programs"}},
      {"workers", "0", V::kUint, false, "parallel programs (0: hardware threads)"},
      {"failure_threshold", "0.1", V::kReal, false,
       "failed share of programs above which the exit code is 3"},
  };
  return keys;
}

void CheckValue(const KeyInfo& info, std::string_view value) {
  auto bad = [&](std::string_view expected) {
    throw PreconditionError("invalid value '" + std::string(value) + "' for " +
                            std::string(info.name) + " (expected " +
                            std::string(expected) + ")");
  };
  switch (info.type) {
    case ValueType::kUint: {
      std::uint64_t v;
      if (!ParseUint(value, v)) bad("a nonnegative integer");
      break;
    }
    case ValueType::kReal: {
      double v;
      if (!ParseReal(value, v) || v < 0) bad("a nonnegative number");
      break;
    }
    case ValueType::kBool:
      if (!ParseBool(value)) bad("true or false");
      break;
    case ValueType::kChoice:
      if (std::find(info.choices.begin(), info.choices.end(), value) ==
          info.choices.end()) {
        std::string list;
        for (auto c : info.choices) list += (list.empty() ? "" : ", ") + std::string(c);
        bad("one of " + list);
      }
      break;
    case ValueType::kFraction:
      try {
        Rational r = Rational::Parse(value);
        if (r <= Rational(0) || r > Rational(1)) bad("a fraction in (0, 1]");
      } catch (const PreconditionError&) {
        bad("a fraction in (0, 1]");
      }
      break;
    case ValueType::kText:
      if (value.find('\n') != std::string_view::npos) bad("a single line");
      break;
  }
}

}  // namespace

Config::Config() {
  for (const auto& k : KeyTable()) values_[std::string(k.name)] = std::string(k.default_value);
}

const std::vector<KeyInfo>& Config::Keys() { return KeyTable(); }

const KeyInfo& Config::Info(std::string_view key) {
  for (const auto& k : KeyTable()) {
    if (k.name == key) return k;
  }
  throw PreconditionError("unknown configuration key '" + std::string(key) + "'");
}

void Config::Set(std::string_view key, std::string_view value) {
  const KeyInfo& info = Info(key);
  CheckValue(info, value);
  values_[std::string(key)] = std::string(value);
}

const std::string& Config::Get(std::string_view key) const {
  auto it = values_.find(std::string(key));
  if (it == values_.end()) Info(key);  // throws
  return it->second;
}

std::uint64_t Config::GetUint(std::string_view key) const {
  std::uint64_t v = 0;
  ParseUint(Get(key), v);
  return v;
}

double Config::GetReal(std::string_view key) const {
  double v = 0;
  ParseReal(Get(key), v);
  return v;
}

bool Config::GetBool(std::string_view key) const { return *ParseBool(Get(key)); }

Rational Config::GetFraction(std::string_view key) const {
  return Rational::Parse(Get(key));
}

Overrides Config::ReadOverrides(std::string_view text, std::string_view origin) {
  Overrides out;
  size_t pos = 0;
  size_t line_no = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = Trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    size_t eq = line.find('=');
    std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) throw PreconditionError(where + "expected key = value");
    std::string key(Trim(line.substr(0, eq)));
    std::string value(Trim(line.substr(eq + 1)));
    try {
      CheckValue(Info(key), value);
    } catch (const PreconditionError& e) {
      throw PreconditionError(where + e.what());
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

Config Config::With(const Overrides& overrides) const {
  Config c = *this;
  for (const auto& [k, v] : overrides) c.Set(k, v);
  return c;
}

void Config::MergeText(std::string_view text, std::string_view origin) {
  *this = With(ReadOverrides(text, origin));
}

void Config::MergeFile(const std::filesystem::path& path) {
  std::string text;
  try {
    text = ReadFileText(path);
  } catch (const Error&) {
    throw PreconditionError("cannot read config file " + path.string());
  }
  MergeText(text, path.string());
}

std::string Config::Serialize() const {
  std::string out;
  for (const auto& k : KeyTable()) {
    out += std::string(k.name) + " = " + Get(k.name) + "\n";
  }
  return out;
}

void Config::Validate() const {
  FuzzConfigOf(*this, "").Validate();
  HarvestLimitsOf(*this).Validate();
  BudgetOf(*this).Validate();
  if (GetUint("fuzz.exec_timeout_ms") == 0) {
    throw PreconditionError("fuzz.exec_timeout_ms must be >= 1");
  }
  if (GetReal("failure_threshold") > 1) {
    throw PreconditionError("failure_threshold must lie in [0, 1]");
  }
  if (GetUint("repair.max_rounds") == 0) {
    throw PreconditionError("repair.max_rounds must be >= 1");
  }
  SplitSpecOf(*this);
}

std::vector<std::string> Config::FrozenDiff(const Config& other) const {
  std::vector<std::string> out;
  for (const auto& k : KeyTable()) {
    if (k.frozen && Get(k.name) != other.Get(k.name)) out.emplace_back(k.name);
  }
  return out;
}

Toolchain ToolchainOf(const Config& c) {
  Toolchain t;
  t.cxx = c.Get("cxx");
  t.cc = c.Get("cc");
  t.opt_level = c.Get("opt_level");
  return t;
}

repair::RepairOptions RepairOptionsOf(const Config& c) {
  repair::RepairOptions o;
  o.max_rounds = static_cast<int>(c.GetUint("repair.max_rounds"));
  o.constant_value = static_cast<long long>(c.GetUint("repair.constant_value"));
  return o;
}

target::TargetInfo LimitsOf(const Config& c) {
  target::TargetInfo t;
  t.timeout = std::chrono::milliseconds(c.GetUint("fuzz.exec_timeout_ms"));
  t.memory_limit = c.GetUint("exec.memory_limit_mb") << 20;
  t.max_input_len = c.GetUint("fuzz.max_input_len");
  t.stdout_cap = c.GetUint("exec.stdout_cap");
  return t;
}

fuzzer::FuzzConfig FuzzConfigOf(const Config& c, std::string_view program_id) {
  fuzzer::FuzzConfig f;
  f.budget_minutes = c.GetReal("fuzz.budget_minutes");
  f.per_exec_timeout = std::chrono::milliseconds(c.GetUint("fuzz.exec_timeout_ms"));
  f.max_input_len = c.GetUint("fuzz.max_input_len");
  f.rng_seed = DeriveSeed(c.GetUint("seed"), "fuzz/" + std::string(program_id));
  f.havoc_iterations_per_entry = static_cast<int>(c.GetUint("fuzz.havoc_iterations"));
  f.exhaust_idle_havoc = c.GetUint("fuzz.exhaust_idle_havoc");
  f.max_execs = c.GetUint("fuzz.max_execs");
  f.coverage_guided = c.GetBool("fuzz.coverage_guided");
  return f;
}

harvest::HarvestLimits HarvestLimitsOf(const Config& c) {
  harvest::HarvestLimits h;
  h.max_pairs = c.GetUint("harvest.max_pairs");
  h.max_pair_chars = c.GetUint("harvest.max_pair_chars");
  return h;
}

harvest::DecodeMode DecodeModeOf(const Config& c) {
  return harvest::ParseDecodeMode(c.Get("harvest.decode_mode"));
}

prompt::AssemblyBudget BudgetOf(const Config& c) {
  prompt::AssemblyBudget b;
  b.max_total_units = c.GetUint("prompt.max_total_units");
  b.code_fraction = c.GetReal("prompt.code_fraction");
  return b;
}

corpus::SplitSpec SplitSpecOf(const Config& c) {
  corpus::Task task = corpus::ParseTask(c.Get("task"));
  corpus::SplitSpec spec = corpus::SplitSpec::Default(task, c.Get("layout"));
  if (!c.Get("split").empty()) {
    auto f = Rational::ParseFractions(c.Get("split"));
    if (f.size() != 3) throw PreconditionError("split needs three fractions");
    spec.fractions = {f[0], f[1], f[2]};
  }
  spec.seed = DeriveSeed(c.GetUint("seed"), "split");
  spec.Validate();
  return spec;
}

}  // namespace fuzztune::pipeline
