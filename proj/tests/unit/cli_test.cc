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

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <sstream>
#include <thread>

#include "cli.h"
#include "doctest.h"
#include "fuzztune/corpus/split.h"
#include "fuzztune/eval/eval.h"
#include "test_util.h"

extern char** environ;

namespace fuzztune::cli {
namespace {

using testing::WriteFile;
using Json = nlohmann::ordered_json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fuzztune");
  std::ostringstream out, err;
  int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path Cli6() { return testing::FixtureDir() / "cli6"; }

// Exec-count-bounded campaigns are reproducible; the wall-clock budget is
// never the binding limit.
std::vector<std::string> Small(std::vector<std::string> args, const std::string& execs = "300") {
  for (std::string a : {"--max-execs", execs.c_str(), "-K", "10", "-q"}) args.push_back(a);
  return args;
}

size_t CountLines(const fs::path& p) {
  std::string t = ReadFileText(p);
  return std::count(t.begin(), t.end(), '\n');
}

TEST_CASE("usage errors exit 1, environment errors exit 2") {
  ScopedTempDir tmp("fuzztune-cli");
  CHECK(Cli({"--help"}).code == kExitOk);
  CHECK(Cli({"pipeline", "--help"}).out.find("--decode-mode") != std::string::npos);
  CHECK(Cli({}).code == kExitUsage);
  CHECK(Cli({"frobnicate"}).code == kExitUsage);
  CHECK(Cli({"ingest", "--corpus", Cli6().string()}).code == kExitUsage);  // no -w
  CHECK(Cli({"ingest", "-w", (tmp.path() / "w").string(), "--corpus", Cli6().string(),
             "--decode-mode", "latin1"})
            .code == kExitUsage);
  CHECK(Cli({"ingest", "-w", (tmp.path() / "w").string(), "--corpus", Cli6().string(),
             "--set", "no.such=1"})
            .code == kExitUsage);
  CHECK(Cli({"ingest", "-w", (tmp.path() / "w").string(), "--corpus", Cli6().string(), "-c",
             (tmp.path() / "missing.conf").string()})
            .code == kExitUsage);
  Result bad_root = Cli({"ingest", "-w", (tmp.path() / "w").string(), "--corpus",
                         (tmp.path() / "nowhere").string()});
  CHECK(bad_root.code == kExitEnvironment);
  CHECK(!bad_root.err.empty());
  CHECK(Cli({"emit", "-w", (tmp.path() / "not-a-workspace").string()}).code != kExitOk);
  CHECK(Cli({"pipeline", "-w", (tmp.path() / "w2").string()}).code == kExitUsage);
  CHECK(Cli({"eval"}).code == kExitUsage);
}

TEST_CASE("ingest reports the manifest and is idempotent") {
  ScopedTempDir tmp("fuzztune-cli");
  std::string ws = (tmp.path() / "ws").string();
  Result r = Cli({"ingest", "-w", ws, "--corpus", Cli6().string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("6 programs in 2 problems") != std::string::npos);
  Json manifest = Json::parse(ReadFileText(fs::path(ws) / "manifest.json"));
  CHECK(manifest["programs"].size() == 6);
  const std::string before = ReadFileText(fs::path(ws) / "manifest.json");
  CHECK(Cli({"ingest", "-w", ws, "--corpus", Cli6().string()}).code == kExitOk);
  CHECK(ReadFileText(fs::path(ws) / "manifest.json") == before);
  CHECK(Cli({"ingest", "-w", ws, "--corpus", Cli6().string(), "--seed", "4"}).code ==
        kExitUsage);
}

TEST_CASE("pipeline on the fixture corpus") {
  ScopedTempDir tmp("fuzztune-cli");
  std::string ws = (tmp.path() / "ws").string();
  Result r = Cli(Small({"pipeline", "-w", ws, "--corpus", Cli6().string(), "--workers", "2"}));
  INFO(r.err);
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("compiled 6 (100.0%)") != std::string::npos);
  CHECK(r.out.find("fuzzed 6 (100.0%)") != std::string::npos);
  fs::path out = fs::path(ws) / "out";
  CHECK(CountLines(out / "dataset.jsonl") == 6);
  Json stats = Json::parse(ReadFileText(out / "stats.json"));
  CHECK(stats["compiled_pct"] == 100.0);
  CHECK(stats["fuzzed_pct"] == 100.0);
  CHECK(stats["pairs_per_program"].get<double>() >= 1.0);
  CHECK(stats["mean_queue_size"].get<double>() >= 1.0);
  const std::string dataset = ReadFileText(out / "dataset.jsonl");

  SUBCASE("rerun is a no-op") {
    CHECK(Cli({"pipeline", "-w", ws, "-q"}).code == kExitOk);
    CHECK(ReadFileText(out / "dataset.jsonl") == dataset);
  }
  SUBCASE("stage commands and frozen keys") {
    CHECK(Cli({"fuzz", "-w", ws, "--max-execs", "10"}).code == kExitUsage);
    CHECK(Cli({"harvest", "-w", ws, "-q"}).code == kExitOk);
    CHECK(Cli({"emit", "-w", ws, "-q", "-o", (tmp.path() / "o2").string()}).code == kExitOk);
    CHECK(ReadFileText(tmp.path() / "o2" / "dataset.jsonl") == dataset);
  }
  SUBCASE("raw_bytes arm renders the seed newline as an escape") {
    Result raw = Cli({"emit", "-w", ws, "-q", "--decode-mode", "raw_bytes", "-o",
                      (tmp.path() / "raw").string()});
    CHECK(raw.code == kExitOk);
    std::string text = ReadFileText(tmp.path() / "raw" / "dataset.jsonl");
    CHECK(text.find("cin>>\\\\x0a;cout<<") != std::string::npos);
    CHECK(CountLines(tmp.path() / "raw" / "dataset.jsonl") == 6);
  }
  SUBCASE("settings precedence: config file, then --set, then flags") {
    WriteFile(tmp.path() / "c.conf", "harvest.max_pairs = 1\nprompt.template = nl_b\n");
    std::string o3 = (tmp.path() / "o3").string();
    CHECK(Cli({"emit", "-w", ws, "-q", "-c", (tmp.path() / "c.conf").string(), "--set",
               "prompt.template=nl_a", "--set", "harvest.max_pairs=3", "--max-pairs", "2",
               "-o", o3})
              .code == kExitOk);
    std::string conf = ReadFileText(fs::path(o3) / "config.txt");
    CHECK(conf.find("harvest.max_pairs = 2\n") != std::string::npos);
    CHECK(conf.find("prompt.template = nl_a\n") != std::string::npos);
    std::string text = ReadFileText(fs::path(o3) / "dataset.jsonl");
    CHECK(text.find("\"template_kind\":\"nl_a\"") != std::string::npos);
  }
}

TEST_CASE("failures above the threshold exit 3") {
  ScopedTempDir tmp("fuzztune-cli");
  fs::copy(Cli6(), tmp.path() / "c", fs::copy_options::recursive);
  WriteFile(tmp.path() / "c" / "2" / "z.txt", "int main( {\n");
  std::string ws = (tmp.path() / "ws").string();
  Result r = Cli(Small({"pipeline", "-w", ws, "--corpus", (tmp.path() / "c").string()}, "50"));
  CHECK(r.code == kExitPartial);
  CHECK(r.out.find("failed 1") != std::string::npos);
  CHECK(CountLines(fs::path(ws) / "out" / "dataset.jsonl") == 7);
  CHECK(Cli({"pipeline", "-w", ws, "-q", "--failure-threshold", "0.5"}).code == kExitOk);
}

TEST_CASE("subsample and eval commands") {
  ScopedTempDir tmp("fuzztune-cli");
  for (int k = 0; k < 10; ++k) {
    for (int i = 0; i < 5; ++i) {
      WriteFile(tmp.path() / "c" / std::to_string(k) / (std::to_string(i) + ".txt"),
                "int main(){}\n");
    }
  }
  std::string ws = (tmp.path() / "ws").string();
  REQUIRE(Cli({"ingest", "-w", ws, "--corpus", (tmp.path() / "c").string(), "--task",
               "classification"})
              .code == kExitOk);
  fs::path sub = tmp.path() / "sub.json";
  Result r = Cli({"subsample", "-w", ws, "--ratio", "2/5", "-o", sub.string()});
  CHECK(r.code == kExitOk);
  auto splits = corpus::SplitsFromJson(Json::parse(ReadFileText(sub)));
  // round(2/5 * 40) = 16 programs; 4:1 gives 12.8 and 3.2, largest remainder 13 and 3.
  CHECK(splits.train.size() == 13);
  CHECK(splits.val.size() == 3);
  CHECK(splits.test.size() == 10);

  // Every test program sits on its problem's axis; decoys outside the test
  // split would be the nearest neighbours if eval did not restrict to it.
  eval::EmbeddingTable table;
  corpus::Splits manifest;
  for (int k = 0; k < 10; ++k) {
    for (int i = 0; i < 5; ++i) {
      std::string id = std::to_string(k) + "/" + std::to_string(i) + ".txt";
      manifest.test.push_back(id);
      table.ids.push_back(id);
      table.labels.push_back(std::to_string(k));
      std::vector<double> v(10, 0.0);
      v[k] = 1.0 + i * 1e-3;
      table.vectors.push_back(v);
    }
    table.ids.push_back("decoy/" + std::to_string(k));
    table.labels.push_back("decoy");
    table.vectors.push_back(std::vector<double>(10, 1.0));
  }
  manifest.train = {"0/0.txt"};
  manifest.val = {"0/1.txt"};
  fs::path splits_path = tmp.path() / "eval_splits.json";
  WriteFile(splits_path, corpus::SplitsToJson(manifest, corpus::SplitSpec{}).dump());
  eval::WriteEmbeddings(tmp.path() / "emb.tsv", table);
  eval::Predictions pred;
  for (int i = 0; i < 8; ++i) {
    pred.ids.push_back("x" + std::to_string(i));
    pred.labels.push_back("a");
    pred.predictions.push_back(i < 2 ? "b" : "a");
  }
  eval::WritePredictions(tmp.path() / "pred.csv", pred);
  fs::path rep = tmp.path() / "report";
  fs::create_directories(rep);
  r = Cli({"eval", "--embeddings", (tmp.path() / "emb.tsv").string(), "--splits",
           splits_path.string(), "--predictions",
           (tmp.path() / "pred.csv").string(), "-o", rep.string(), "--threads", "2"});
  INFO(r.err);
  CHECK(r.code == kExitOk);
  Json metrics = Json::parse(ReadFileText(rep / "metrics.json"));
  CHECK(metrics["clone_detection"]["map_at_r"] == 1.0);
  CHECK(metrics["clone_detection"]["n_queries"] == 50);
  CHECK(metrics["classification"]["error_rate"] == 0.25);
  CHECK(fs::is_regular_file(rep / "per_problem.csv"));
  CHECK(Cli({"eval", "--embeddings", (tmp.path() / "emb.tsv").string(), "--similarity",
             "manhattan"})
            .code == kExitUsage);
}

#ifdef FUZZTUNE_BIN

struct Child {
  pid_t pid = -1;

  explicit Child(std::vector<std::string> args) {
    args.insert(args.begin(), FUZZTUNE_BIN);
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    posix_spawn_file_actions_t fa;
    posix_spawn_file_actions_init(&fa);
    posix_spawn_file_actions_addopen(&fa, 1, "/dev/null", O_WRONLY, 0);
    posix_spawn_file_actions_addopen(&fa, 2, "/dev/null", O_WRONLY, 0);
    REQUIRE(posix_spawn(&pid, FUZZTUNE_BIN, &fa, nullptr, argv.data(), environ) == 0);
    posix_spawn_file_actions_destroy(&fa);
  }

  // Exit code, or 128 + signal.
  int Wait() {
    int status = 0;
    waitpid(pid, &status, 0);
    return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  }
};

size_t EmittedPrograms(const fs::path& ws) {
  size_t n = 0;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(ws / "programs", ec)) {
    try {
      Json st = Json::parse(ReadFileText(e.path() / "state.json"));
      n += st["stage"] == "emitted";
    } catch (const std::exception&) {
    }
  }
  return n;
}

void WaitForProgress(const fs::path& ws, size_t emitted) {
  for (int i = 0; i < 6000 && EmittedPrograms(ws) < emitted; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

TEST_CASE("interrupted and killed runs resume to the uninterrupted dataset") {
  ScopedTempDir tmp("fuzztune-cli");
  auto args = [&](const std::string& ws) {
    return Small({"pipeline", "-w", (tmp.path() / ws).string(), "--corpus", Cli6().string(),
                  "--workers", "1"},
                 "1500");
  };
  REQUIRE(Cli(args("ref")).code == kExitOk);
  const std::string expected = ReadFileText(tmp.path() / "ref" / "out" / "dataset.jsonl");

  Child interrupted(args("a"));
  WaitForProgress(tmp.path() / "a", 1);
  kill(interrupted.pid, SIGINT);
  CHECK(interrupted.Wait() == kExitInterrupted);
  CHECK(EmittedPrograms(tmp.path() / "a") < 6);
  CHECK(!fs::exists(tmp.path() / "a" / "out" / "dataset.jsonl"));

  Child killed(args("a"));
  WaitForProgress(tmp.path() / "a", 3);
  kill(killed.pid, SIGKILL);
  CHECK(killed.Wait() == 128 + SIGKILL);

  Child resumed(args("a"));
  CHECK(resumed.Wait() == kExitOk);
  CHECK(ReadFileText(tmp.path() / "a" / "out" / "dataset.jsonl") == expected);
}

#endif

}  // namespace
}  // namespace fuzztune::cli
