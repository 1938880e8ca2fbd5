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

#include <cctype>
#include <optional>

#include "doctest.h"
#include "fuzztune/common/errors.h"
#include "fuzztune/common/rng.h"
#include "fuzztune/common/utf8.h"
#include "fuzztune/harvest/harvest.h"
#include "fuzztune/target/build.h"
#include "scripted_targets.h"
#include "test_util.h"

namespace fuzztune::harvest {
namespace {

using target::ExecStatus;
using target::ScriptedTarget;

constexpr const char* kAdder =
    "#include <cstdio>\n"
    "int main() {\n"
    "  long long a, b;\n"
    "  if (scanf(\"%lld%lld\", &a, &b) != 2) return 0;\n"
    "  printf(\"%lld\\n\", a + b);\n"
    "}\n";

repair::RepairedProgram Compiling(std::string id, std::string source) {
  repair::RepairedProgram r;
  r.program_id = std::move(id);
  r.final_source = std::move(source);
  r.status = repair::RepairStatus::kCompiles;
  r.rounds_used = 1;
  return r;
}

// What "%lld%lld" reads from `in`, or nullopt when it does not read two
// numbers. Returns {} (no verdict) for digit runs long enough to overflow.
struct AdderVerdict {
  bool decided = false;
  std::optional<long long> sum;
};

AdderVerdict AdderOracle(const Bytes& in) {
  size_t p = 0;
  long long v[2];
  for (int k = 0; k < 2; ++k) {
    while (p < in.size() && std::isspace(in[p])) ++p;
    bool neg = false;
    if (p < in.size() && (in[p] == '+' || in[p] == '-')) neg = in[p++] == '-';
    size_t start = p;
    long long x = 0;
    while (p < in.size() && std::isdigit(in[p])) {
      if (p - start >= 15) return {};
      x = x * 10 + (in[p++] - '0');
    }
    if (p == start) return {true, std::nullopt};
    v[k] = neg ? -x : x;
  }
  return {true, v[0] + v[1]};
}

Bytes B(std::initializer_list<int> v) {
  Bytes out;
  for (int x : v) out.push_back(static_cast<std::uint8_t>(x));
  return out;
}

std::unique_ptr<ScriptedTarget> Echo() {
  return std::make_unique<ScriptedTarget>("t/echo", testing::EchoScript());
}

TEST_CASE("decode examples") {
  CHECK(Decode(B({0x37, 0x0A}), DecodeMode::kUtf8) == "7\n");
  CHECK(Decode(B({0xFF}), DecodeMode::kUtf8) == "\xEF\xBF\xBD");
  CHECK(Decode(B({0x07}), DecodeMode::kUtf8) == "");
  CHECK(Decode(B({'a', '\t', 'b', '\r', '\n'}), DecodeMode::kUtf8) == "a\tb\n");
  CHECK(Decode(ToBytes("a\n\n\n\nb\n\nc"), DecodeMode::kUtf8) == "a\n\nb\n\nc");
  CHECK(Decode(ToBytes("a\n\x01\n\x02\nb"), DecodeMode::kUtf8) == "a\n\nb");
  CHECK(Decode(ToBytes("caf\xC3\xA9"), DecodeMode::kUtf8) == "caf\xC3\xA9");
  CHECK(Decode(ToBytes("\xC2\x85x"), DecodeMode::kUtf8) == "x");  // C1 NEL
  CHECK(Decode(Bytes{}, DecodeMode::kUtf8) == "");

  CHECK(Decode(ToBytes("3 4\n"), DecodeMode::kRawBytes) == "3 4\\x0a");
  CHECK(Decode(B({0xFF, '\\', 'z'}), DecodeMode::kRawBytes) == "\\xff\\x5cz");
  CHECK(Decode(Bytes{}, DecodeMode::kRawBytes) == "");
}

TEST_CASE("decode properties on random bytes") {
  Rng rng(17);
  for (int i = 0; i < 2000; ++i) {
    Bytes b(rng.Below(40));
    for (auto& x : b) {
      // Bias toward newlines and control bytes.
      switch (rng.Below(4)) {
        case 0: x = '\n'; break;
        case 1: x = static_cast<std::uint8_t>(rng.Below(32)); break;
        default: x = static_cast<std::uint8_t>(rng());
      }
    }
    std::string u = Decode(b, DecodeMode::kUtf8);
    REQUIRE(utf8::IsValid(ToBytes(u)));
    CHECK(u.find("\n\n\n") == std::string::npos);
    for (char32_t cp : utf8::DecodeLossy(ToBytes(u))) {
      bool control = cp < 0x20 || cp == 0x7F || (cp >= 0x80 && cp <= 0x9F);
      CHECK((!control || cp == U'\n' || cp == U'\t'));
    }
    CHECK(Decode(ToBytes(u), DecodeMode::kUtf8) == u);

    // Raw rendering is injective: undo it.
    std::string r = Decode(b, DecodeMode::kRawBytes);
    Bytes back;
    for (size_t p = 0; p < r.size();) {
      if (r[p] == '\\') {
        REQUIRE(p + 3 < r.size());
        back.push_back(static_cast<std::uint8_t>(std::stoi(r.substr(p + 2, 2), nullptr, 16)));
        p += 4;
      } else {
        CHECK(std::isprint(static_cast<unsigned char>(r[p])));
        back.push_back(static_cast<std::uint8_t>(r[p++]));
      }
    }
    CHECK(back == b);
  }
}

TEST_CASE("decode mode names") {
  CHECK(ParseDecodeMode("utf8") == DecodeMode::kUtf8);
  CHECK(ParseDecodeMode(DecodeModeName(DecodeMode::kRawBytes)) == DecodeMode::kRawBytes);
  CHECK_THROWS_AS(ParseDecodeMode("latin1"), PreconditionError);
}

TEST_CASE("replay the adder against a direct run") {
  ScopedTempDir dir;
  target::PlainBackend backend;
  auto built = Build(Compiling("p/adder.cpp", kAdder), backend, dir.path());
  REQUIRE(built.smoke_ok);
  for (std::string in : {"3 4\n", "-5 12", "1\n", "", "x"}) {
    ReplayResult r = Replay(*built.target, ToBytes(in));
    CHECK(r.status == ExecStatus::kOk);
    CHECK(!r.truncated);
    CHECK(ToString(r.output) == testing::CompileAndRun(kAdder, in));
  }
  CHECK(ToString(Replay(*built.target, ToBytes("3 4\n")).output) == "7\n");
}

TEST_CASE("replay edge cases") {
  auto echo = Echo();
  ReplayResult r = Replay(*echo, Bytes{});
  CHECK(r.status == ExecStatus::kOk);
  CHECK(r.output.empty());

  ScriptedTarget hang("t/hang", [](ByteView, target::ExecResult& out) {
    out.status = ExecStatus::kHang;
  });
  CHECK(Replay(hang, ToBytes("1")).status == ExecStatus::kHang);

  target::TargetInfo info{"t/cov", target::TargetKind::kInstrumentedBinary, "/bin/cat"};
  target::ProcessTarget instrumented(info, "/bin/cat", true);
  CHECK_THROWS_AS(Replay(instrumented, ToBytes("1")), PreconditionError);
}

TEST_CASE("first k in queue order") {
  auto echo = Echo();
  std::vector<Bytes> queue = {ToBytes("a"), ToBytes("b"), ToBytes("c")};
  HarvestLimits limits;
  limits.max_pairs = 2;
  auto pairs = HarvestProgram(*echo, queue, limits, DecodeMode::kUtf8);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].input_text == "a");
  CHECK(pairs[0].output_text == "a");
  CHECK(pairs[1].input_bytes == ToBytes("b"));
  CHECK(pairs[1].status == ExecStatus::kOk);
  CHECK(pairs[1].decode_mode == DecodeMode::kUtf8);

  limits.max_pairs = 0;
  CHECK_THROWS_AS(HarvestProgram(*echo, queue, limits, DecodeMode::kUtf8),
                  PreconditionError);
}

TEST_CASE("faulty, truncated and long pairs are dropped") {
  ScriptedTarget t("t/mixed", [](ByteView in, target::ExecResult& out) {
    std::string s = ToString(in);
    if (s == "hang") out.status = ExecStatus::kHang;
    if (s == "crash") out.status = ExecStatus::kCrash;
    if (s == "big") out.stdout_bytes.assign(100, 'z');
    else out.stdout_bytes.assign(in.begin(), in.end());
  });
  std::vector<Bytes> queue = {ToBytes("hang"),  ToBytes("ok1"), ToBytes("crash"),
                              ToBytes("big"),   ToBytes(std::string(30, 'L')),
                              ToBytes("ok2")};
  HarvestLimits limits;
  limits.max_pair_chars = 50;
  HarvestStats st;
  auto pairs = HarvestProgram(t, queue, limits, DecodeMode::kUtf8, {}, &st);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].input_text == "ok1");
  CHECK(pairs[1].input_text == "ok2");
  CHECK(st.dropped_fault == 2);
  CHECK(st.dropped_long == 2);  // "big" (103) and 30+30
  CHECK(st.replayed == 6);

  // A 25+25 pair sits exactly on the limit.
  auto edge = HarvestProgram(t, {ToBytes(std::string(25, 'q'))}, limits,
                             DecodeMode::kUtf8);
  CHECK(edge.size() == 1);
}

TEST_CASE("truncated output is dropped") {
  ScriptedTarget loud("t/loud", [](ByteView, target::ExecResult& out) {
    out.stdout_bytes.assign(target::kDefaultStdoutCap + 1, 'y');
  });
  HarvestLimits limits;
  limits.max_pair_chars = 1 << 20;
  HarvestStats st;
  CHECK(HarvestProgram(loud, {Bytes{}}, limits, DecodeMode::kUtf8, {}, &st).empty());
  CHECK(st.dropped_truncated == 1);
}

TEST_CASE("replay errors are logged and skipped") {
  int calls = 0;
  ScriptedTarget flaky("t/err", [&](ByteView in, target::ExecResult& out) {
    if (++calls == 1) throw ExecError("channel lost");
    out.stdout_bytes.assign(in.begin(), in.end());
  });
  HarvestStats st;
  auto pairs = HarvestProgram(flaky, {ToBytes("a"), ToBytes("b")}, {},
                              DecodeMode::kUtf8, {}, &st);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].input_text == "b");
  CHECK(st.replay_errors == 1);
  REQUIRE(st.messages.size() == 1);
  CHECK(st.messages[0].find("channel lost") != std::string::npos);
}

TEST_CASE("both decode modes select the same inputs") {
  ScriptedTarget t("t/bin", [](ByteView in, target::ExecResult& out) {
    out.stdout_bytes.assign(in.rbegin(), in.rend());
  });
  Rng rng(5);
  std::vector<Bytes> queue;
  for (int i = 0; i < 60; ++i) {
    Bytes b(rng.Below(120));
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
    queue.push_back(b);
  }
  HarvestLimits limits;
  limits.max_pairs = 8;
  limits.max_pair_chars = 100;
  auto u = HarvestProgram(t, queue, limits, DecodeMode::kUtf8);
  auto r = HarvestProgram(t, queue, limits, DecodeMode::kRawBytes);
  REQUIRE(u.size() == r.size());
  CHECK(!u.empty());
  for (size_t i = 0; i < u.size(); ++i) {
    CHECK(u[i].input_bytes == r[i].input_bytes);
    CHECK(u[i].output_bytes == r[i].output_bytes);
    CHECK(r[i].input_text == Decode(r[i].input_bytes, DecodeMode::kRawBytes));
    CHECK(utf8::Length(u[i].input_text) + utf8::Length(u[i].output_text) <= 100);
  }
}

TEST_CASE("harvest of a fuzzed adder") {
  ScopedTempDir dir;
  target::InstrumentedBackend cov_backend;
  target::PlainBackend plain_backend;
  auto program = Compiling("p/adder.cpp", kAdder);
  auto cov = Build(program, cov_backend, dir.path() / "cov");
  auto plain = Build(program, plain_backend, dir.path() / "plain");

  fuzzer::FuzzConfig config;
  config.max_execs = 1500;
  config.rng_seed = 3;
  auto report = fuzzer::FuzzProgram(*cov.target, {ToBytes("3 4\n")}, config);
  REQUIRE(report.queue.size() >= 2);

  HarvestLimits limits;
  limits.max_pairs = 50;
  auto pairs = HarvestCampaign(*plain.target, report, limits, DecodeMode::kUtf8);
  REQUIRE(!pairs.empty());
  CHECK(pairs[0].input_bytes == ToBytes("3 4\n"));
  CHECK(pairs[0].output_text == "7\n");
  int checked = 0;
  for (const auto& p : pairs) {
    CHECK(p.output_text == Decode(p.output_bytes, DecodeMode::kUtf8));
    AdderVerdict v = AdderOracle(p.input_bytes);
    if (!v.decided) continue;
    ++checked;
    if (v.sum) {
      CHECK(p.output_text == std::to_string(*v.sum) + "\n");
    } else {
      CHECK(p.output_text.empty());
    }
  }
  CHECK(checked >= 1);

  auto again = HarvestCampaign(*plain.target, report, limits, DecodeMode::kUtf8);
  CHECK(again == pairs);
}

TEST_CASE("recorded crash and hang inputs never become pairs") {
  auto t = std::make_unique<ScriptedTarget>("t/bang", testing::CrashOnBangScript());
  fuzzer::FuzzConfig config;
  config.max_execs = 3000;
  config.rng_seed = 8;
  auto report = fuzzer::FuzzProgram(*t, {ToBytes("x1"), ToBytes("a!")}, config);
  REQUIRE(!report.crashes.empty());
  // Even when a recorded crash input is forced into the queue.
  fuzzer::QueueEntry forced;
  forced.input = report.crashes[0];
  report.queue.insert(report.queue.begin(), forced);

  HarvestLimits limits;
  limits.max_pairs = 1000;
  limits.max_pair_chars = 1 << 20;
  HarvestStats st;
  auto pairs = HarvestCampaign(*t, report, limits, DecodeMode::kUtf8, &st);
  CHECK(st.dropped_excluded >= 1);
  for (const auto& p : pairs) {
    for (const auto& c : report.crashes) CHECK(p.input_bytes != c);
    for (const auto& h : report.hangs) CHECK(p.input_bytes != h);
    CHECK(std::find(p.input_bytes.begin(), p.input_bytes.end(), '!') ==
          p.input_bytes.end());
  }
}

TEST_CASE("testcases.jsonl round trip") {
  ScopedTempDir dir;
  auto echo = Echo();
  std::vector<Bytes> queue = {ToBytes("3 4\n"), B({0xFF, 0x00, 'k'}), Bytes{}};
  for (DecodeMode mode : {DecodeMode::kUtf8, DecodeMode::kRawBytes}) {
    auto pairs = HarvestProgram(*echo, queue, {}, mode);
    REQUIRE(pairs.size() == 3);
    auto path = dir.path() / "out" / "testcases.jsonl";
    WriteTestcases(path, "p/echo.cpp", pairs);
    CHECK(ReadTestcases(path) == pairs);

    auto j = PairToJson("p/echo.cpp", pairs[0]);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"program_id", "input_text", "output_text",
                                           "input_b64", "output_b64", "decode_mode"});
    CHECK(j["input_b64"] == "MyA0Cg==");
    CHECK(j["decode_mode"] == DecodeModeName(mode));
  }
  WriteTestcases(dir.path() / "empty.jsonl", "p/x", {});
  CHECK(ReadTestcases(dir.path() / "empty.jsonl").empty());
  testing::WriteFile(dir.path() / "bad.jsonl", "{\"input_text\": 1}\n");
  CHECK_THROWS_AS(ReadTestcases(dir.path() / "bad.jsonl"), PreconditionError);
}

}  // namespace
}  // namespace fuzztune::harvest
