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

#include "fuzztune/harvest/harvest.h"

#include <set>

#include "fuzztune/common/errors.h"
#include "fuzztune/common/fs_util.h"
#include "fuzztune/common/utf8.h"

namespace fuzztune::harvest {
namespace {

bool IsStrippedControl(char32_t cp) {
  if (cp == U'\n' || cp == U'\t') return false;
  return cp < 0x20 || cp == 0x7F || (cp >= 0x80 && cp <= 0x9F);
}

std::string DecodeUtf8(ByteView bytes) {
  std::string out;
  out.reserve(bytes.size());
  int newlines = 0;
  for (char32_t cp : utf8::DecodeLossy(bytes)) {
    if (IsStrippedControl(cp)) continue;
    if (cp == U'\n') {
      if (++newlines > 2) continue;
    } else {
      newlines = 0;
    }
    utf8::Append(out, cp);
  }
  return out;
}

std::string DecodeRaw(ByteView bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size());
  for (std::uint8_t b : bytes) {
    if (b >= 0x20 && b < 0x7F && b != '\\') {
      out.push_back(static_cast<char>(b));
    } else {
      out += "\\x";
      out.push_back(kHex[b >> 4]);
      out.push_back(kHex[b & 0xF]);
    }
  }
  return out;
}

}  // namespace

std::string_view DecodeModeName(DecodeMode mode) {
  return mode == DecodeMode::kRawBytes ? "raw_bytes" : "utf8";
}

DecodeMode ParseDecodeMode(std::string_view name) {
  if (name == "utf8") return DecodeMode::kUtf8;
  if (name == "raw_bytes") return DecodeMode::kRawBytes;
  throw PreconditionError("unknown decode mode '" + std::string(name) +
                          "' (expected utf8 or raw_bytes)");
}

std::string Decode(ByteView bytes, DecodeMode mode) {
  return mode == DecodeMode::kUtf8 ? DecodeUtf8(bytes) : DecodeRaw(bytes);
}

void HarvestLimits::Validate() const {
  if (max_pairs == 0) throw PreconditionError("max_pairs must be >= 1");
  if (max_pair_chars == 0) throw PreconditionError("max_pair_chars must be >= 1");
}

ReplayResult Replay(target::Target& plain, ByteView input) {
  if (plain.info().kind == target::TargetKind::kInstrumentedBinary) {
    throw PreconditionError("replay needs an uninstrumented build of " +
                            plain.info().program_id);
  }
  target::ExecResult r = plain.Execute(input);
  return ReplayResult{std::move(r.stdout_bytes), r.status, r.stdout_truncated};
}

std::vector<TestCasePair> HarvestProgram(target::Target& plain,
                                         const std::vector<Bytes>& queue,
                                         const HarvestLimits& limits,
                                         DecodeMode mode,
                                         const std::vector<Bytes>& excluded,
                                         HarvestStats* stats) {
  limits.Validate();
  HarvestStats local;
  HarvestStats& st = stats ? *stats : local;
  const std::set<Bytes> skip(excluded.begin(), excluded.end());
  std::vector<TestCasePair> pairs;
  for (const Bytes& input : queue) {
    if (pairs.size() >= limits.max_pairs) break;
    if (skip.count(input)) {
      ++st.dropped_excluded;
      continue;
    }
    ReplayResult r;
    try {
      r = Replay(plain, input);
    } catch (const ExecError& e) {
      ++st.replay_errors;
      st.messages.push_back(plain.info().program_id + ": " + e.what());
      continue;
    }
    ++st.replayed;
    if (r.status != target::ExecStatus::kOk) {
      ++st.dropped_fault;
      continue;
    }
    if (r.truncated) {
      ++st.dropped_truncated;
      continue;
    }
    std::string in_text = DecodeUtf8(input);
    std::string out_text = DecodeUtf8(r.output);
    if (utf8::Length(in_text) + utf8::Length(out_text) > limits.max_pair_chars) {
      ++st.dropped_long;
      continue;
    }
    TestCasePair pair;
    if (mode == DecodeMode::kRawBytes) {
      in_text = DecodeRaw(input);
      out_text = DecodeRaw(r.output);
    }
    pair.input_bytes = input;
    pair.output_bytes = std::move(r.output);
    pair.input_text = std::move(in_text);
    pair.output_text = std::move(out_text);
    pair.decode_mode = mode;
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<TestCasePair> HarvestCampaign(target::Target& plain,
                                          const fuzzer::FuzzReport& report,
                                          const HarvestLimits& limits,
                                          DecodeMode mode, HarvestStats* stats) {
  std::vector<Bytes> queue;
  queue.reserve(report.queue.size());
  for (const auto& e : report.queue) queue.push_back(e.input);
  std::vector<Bytes> excluded = report.crashes;
  excluded.insert(excluded.end(), report.hangs.begin(), report.hangs.end());
  return HarvestProgram(plain, queue, limits, mode, excluded, stats);
}

nlohmann::ordered_json PairToJson(std::string_view program_id,
                                  const TestCasePair& pair) {
  nlohmann::ordered_json j;
  j["program_id"] = program_id;
  j["input_text"] = pair.input_text;
  j["output_text"] = pair.output_text;
  j["input_b64"] = Base64Encode(pair.input_bytes);
  j["output_b64"] = Base64Encode(pair.output_bytes);
  j["decode_mode"] = DecodeModeName(pair.decode_mode);
  return j;
}

TestCasePair PairFromJson(const nlohmann::json& j) {
  TestCasePair p;
  try {
    p.input_text = j.at("input_text").get<std::string>();
    p.output_text = j.at("output_text").get<std::string>();
    p.input_bytes = Base64Decode(j.at("input_b64").get<std::string>());
    p.output_bytes = Base64Decode(j.at("output_b64").get<std::string>());
    p.decode_mode = ParseDecodeMode(j.at("decode_mode").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed test case record: ") + e.what());
  }
  return p;
}

void WriteTestcases(const std::filesystem::path& path, std::string_view program_id,
                    const std::vector<TestCasePair>& pairs) {
  std::string text;
  for (const auto& p : pairs) {
    text += PairToJson(program_id, p).dump();
    text += '\n';
  }
  WriteFileAtomic(path, std::string_view(text));
}

std::vector<TestCasePair> ReadTestcases(const std::filesystem::path& path) {
  std::string text = ReadFileText(path);
  std::vector<TestCasePair> pairs;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string_view line(text.data() + pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw PreconditionError(path.string() + ": " + e.what());
    }
    pairs.push_back(PairFromJson(j));
  }
  return pairs;
}

}  // namespace fuzztune::harvest
