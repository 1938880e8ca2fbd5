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

#ifndef FUZZTUNE_TESTS_SUPPORT_SCRIPTED_TARGETS_H_
#define FUZZTUNE_TESTS_SUPPORT_SCRIPTED_TARGETS_H_

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "fuzztune/common/rng.h"
#include "fuzztune/target/target.h"

namespace fuzztune::testing {

inline constexpr std::string_view kStaircaseKey = "FUZZTUNE";
inline constexpr int kStaircaseLevels = 8;

inline int StaircaseDepth(ByteView in) {
  int d = 0;
  while (d < kStaircaseLevels && static_cast<size_t>(d) < in.size() &&
         in[d] == static_cast<uint8_t>(kStaircaseKey[d])) {
    ++d;
  }
  return d;
}

// Edge recorded for reaching `level` (0 is the entry edge).
inline uint32_t StaircaseEdge(int level) { return 1000 + 7 * static_cast<uint32_t>(level); }

// Branch i is taken only when the first i bytes spell the key's prefix.
inline target::Script StaircaseScript() {
  return [](ByteView in, target::ExecResult& out) {
    const int d = StaircaseDepth(in);
    for (int level = 0; level <= d; ++level) out.coverage.Hit(StaircaseEdge(level));
    out.stdout_bytes.push_back(static_cast<uint8_t>('0' + d));
  };
}

inline std::unique_ptr<target::ScriptedTarget> StaircaseTarget() {
  return std::make_unique<target::ScriptedTarget>("fixture/staircase", StaircaseScript(),
                                                  "staircase");
}

// Same coverage for every input; copies stdin to stdout.
inline target::Script EchoScript() {
  return [](ByteView in, target::ExecResult& out) {
    out.coverage.Hit(7);
    out.coverage.Hit(8);
    out.stdout_bytes.assign(in.begin(), in.end());
  };
}

// Crashes whenever the input contains '!'.
inline target::Script CrashOnBangScript() {
  return [](ByteView in, target::ExecResult& out) {
    out.coverage.Hit(1);
    if (std::find(in.begin(), in.end(), '!') != in.end()) {
      out.coverage.Hit(2);
      out.status = target::ExecStatus::kCrash;
      out.signal = 11;
      return;
    }
    if (!in.empty() && in[0] == 'x') out.coverage.Hit(3);
    out.stdout_bytes.assign(in.begin(), in.end());
  };
}

// A randomly generated branchy target: each rule fires when its byte lies
// in a range (and its prerequisite fired), hitting an edge a
// byte-dependent number of times. Some rules crash or hang.
struct RandomTargetSpec {
  struct Rule {
    size_t pos;
    uint8_t lo, hi;
    int prereq;  // index of an earlier rule or -1
    uint32_t edge;
    uint32_t count_mod;  // 0: single hit
    target::ExecStatus effect;
  };
  std::vector<Rule> rules;
  bool flaky = false;

  static RandomTargetSpec Generate(uint64_t seed, bool allow_faults) {
    Rng rng(seed);
    RandomTargetSpec s;
    const int n = 2 + static_cast<int>(rng.Below(10));
    for (int i = 0; i < n; ++i) {
      Rule r;
      r.pos = rng.Below(6);
      uint8_t a = static_cast<uint8_t>(rng());
      uint8_t width = static_cast<uint8_t>(rng.Below(64));
      r.lo = a;
      r.hi = static_cast<uint8_t>(std::min<int>(255, a + width));
      r.prereq = i > 0 && rng.Chance(1, 2) ? static_cast<int>(rng.Below(i)) : -1;
      r.edge = static_cast<uint32_t>(rng.Below(1 << 16));
      r.count_mod = rng.Chance(1, 3) ? 1 + static_cast<uint32_t>(rng.Below(40)) : 0;
      r.effect = target::ExecStatus::kOk;
      if (allow_faults && rng.Chance(1, 8)) {
        r.effect = rng.Chance(1, 2) ? target::ExecStatus::kCrash : target::ExecStatus::kHang;
      }
      s.rules.push_back(r);
    }
    return s;
  }

  target::Script MakeScript() const {
    auto calls = std::make_shared<uint64_t>(0);
    return [spec = *this, calls](ByteView in, target::ExecResult& out) {
      ++*calls;
      out.coverage.Hit(0xFFFF);
      std::vector<bool> fired(spec.rules.size(), false);
      for (size_t i = 0; i < spec.rules.size(); ++i) {
        const Rule& r = spec.rules[i];
        if (r.pos >= in.size() || in[r.pos] < r.lo || in[r.pos] > r.hi) continue;
        if (r.prereq >= 0 && !fired[r.prereq]) continue;
        fired[i] = true;
        out.coverage.Hit(r.edge, r.count_mod ? 1 + in[r.pos] % r.count_mod : 1);
        if (r.effect != target::ExecStatus::kOk) {
          out.status = r.effect;
          return;
        }
      }
      if (spec.flaky && *calls % 3 == 0) out.coverage.Hit(0x1234);
      out.stdout_bytes.assign(in.begin(), in.end());
    };
  }
};

}  // namespace fuzztune::testing

#endif  // FUZZTUNE_TESTS_SUPPORT_SCRIPTED_TARGETS_H_
