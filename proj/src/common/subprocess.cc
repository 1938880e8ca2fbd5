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

#include "fuzztune/common/subprocess.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/personality.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "fuzztune/common/errors.h"

extern char** environ;

namespace fuzztune {
namespace {

using Clock = std::chrono::steady_clock;

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { Close(); }
  int get() const { return fd_; }
  void Reset(int fd) {
    Close();
    fd_ = fd;
  }
  void Close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

struct Pipe {
  Fd read_end;
  Fd write_end;
  Pipe() {
    int fds[2];
    if (::pipe2(fds, O_CLOEXEC) != 0) {
      throw EnvironmentError(std::string("pipe2: ") + std::strerror(errno));
    }
    read_end.Reset(fds[0]);
    write_end.Reset(fds[1]);
  }
};

[[noreturn]] void ChildFail(int err_fd, int code) {
  ssize_t ignored = ::write(err_fd, &code, sizeof(code));
  (void)ignored;
  ::_exit(127);
}

void DrainInto(int fd, Bytes& sink, size_t cap, bool& truncated, bool& eof) {
  char buf[16384];
  for (;;) {
    ssize_t n = ::read(fd, buf, sizeof(buf));
    if (n > 0) {
      size_t room = cap > sink.size() ? cap - sink.size() : 0;
      size_t take = std::min<size_t>(room, static_cast<size_t>(n));
      sink.insert(sink.end(), buf, buf + take);
      if (take < static_cast<size_t>(n)) truncated = true;
      continue;
    }
    if (n == 0) eof = true;
    if (n < 0 && errno == EINTR) continue;
    return;  // EAGAIN or error
  }
}

}  // namespace

SubprocessResult RunSubprocess(const SubprocessOptions& options) {
  if (options.argv.empty()) throw PreconditionError("empty argv");

  std::vector<char*> argv;
  for (const auto& a : options.argv) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  std::vector<std::string> env_storage;
  for (char** e = environ; e && *e; ++e) env_storage.emplace_back(*e);
  for (const auto& kv : options.extra_env) env_storage.push_back(kv);
  std::vector<char*> envp;
  for (auto& kv : env_storage) envp.push_back(kv.data());
  envp.push_back(nullptr);

  std::string stdin_path =
      options.stdin_path ? options.stdin_path->string() : "/dev/null";
  std::string cwd = options.cwd.string();

  Pipe out_pipe;
  Pipe err_pipe;
  Pipe exec_status;

  auto start = Clock::now();
  pid_t pid = ::fork();
  if (pid < 0) {
    throw EnvironmentError(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    int status_fd = exec_status.write_end.get();
    ::setpgid(0, 0);
    ::personality(ADDR_NO_RANDOMIZE);
    struct rlimit core_limit = {0, 0};
    ::setrlimit(RLIMIT_CORE, &core_limit);
    if (options.memory_limit > 0) {
      struct rlimit as_limit = {options.memory_limit, options.memory_limit};
      ::setrlimit(RLIMIT_AS, &as_limit);
    }
    int in_fd = ::open(stdin_path.c_str(), O_RDONLY);
    if (in_fd < 0) ChildFail(status_fd, errno);
    int null_fd = ::open("/dev/null", O_WRONLY);
    if (null_fd < 0) ChildFail(status_fd, errno);
    ::dup2(in_fd, 0);
    ::dup2(out_pipe.write_end.get(), 1);
    ::dup2(options.capture_stderr ? err_pipe.write_end.get() : null_fd, 2);
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) ChildFail(status_fd, errno);
    ::execvpe(argv[0], argv.data(), envp.data());
    ChildFail(status_fd, errno);
  }

  out_pipe.write_end.Close();
  err_pipe.write_end.Close();
  exec_status.write_end.Close();

  int exec_errno = 0;
  ssize_t got;
  do {
    got = ::read(exec_status.read_end.get(), &exec_errno, sizeof(exec_errno));
  } while (got < 0 && errno == EINTR);
  if (got == sizeof(exec_errno)) {
    int ignored;
    ::waitpid(pid, &ignored, 0);
    throw EnvironmentError("cannot execute '" + options.argv[0] +
                           "': " + std::strerror(exec_errno));
  }

  SubprocessResult result;
  ::fcntl(out_pipe.read_end.get(), F_SETFL, O_NONBLOCK);
  ::fcntl(err_pipe.read_end.get(), F_SETFL, O_NONBLOCK);

  const bool limited = options.timeout.count() > 0;
  const auto deadline = start + options.timeout;
  auto remaining_ms = [&]() -> int {
    if (!limited) return -1;
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    return left.count() < 0 ? 0 : static_cast<int>(left.count()) + 1;
  };

  bool out_eof = false;
  bool err_eof = !options.capture_stderr;
  Bytes err_bytes;
  bool err_truncated = false;
  while (!(out_eof && err_eof)) {
    pollfd fds[2];
    nfds_t n = 0;
    if (!out_eof) fds[n++] = {out_pipe.read_end.get(), POLLIN, 0};
    if (!err_eof) fds[n++] = {err_pipe.read_end.get(), POLLIN, 0};
    int timeout = remaining_ms();
    if (limited && Clock::now() >= deadline) {
      result.timed_out = true;
      break;
    }
    int rc = ::poll(fds, n, timeout);
    if (rc < 0 && errno == EINTR) continue;
    if (rc == 0) continue;  // re-check deadline
    for (nfds_t i = 0; i < n; ++i) {
      if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      if (fds[i].fd == out_pipe.read_end.get()) {
        DrainInto(fds[i].fd, result.stdout_data, options.stdout_cap,
                  result.stdout_truncated, out_eof);
      } else {
        DrainInto(fds[i].fd, err_bytes, options.stderr_cap, err_truncated,
                  err_eof);
      }
    }
  }

  int status = 0;
  bool reaped = false;
  if (!result.timed_out) {
    // Pipes closed; the process is usually already gone.
    auto backoff = std::chrono::microseconds(20);
    for (;;) {
      pid_t r = ::waitpid(pid, &status, WNOHANG);
      if (r == pid) {
        reaped = true;
        break;
      }
      if (r < 0 && errno != EINTR) break;
      if (limited && Clock::now() >= deadline) {
        result.timed_out = true;
        break;
      }
      std::this_thread::sleep_for(backoff);
      backoff = std::min(backoff * 2, std::chrono::microseconds(2000));
    }
  }
  if (!reaped) {
    ::kill(-pid, SIGKILL);
    ::kill(pid, SIGKILL);
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
  }

  result.elapsed_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  if (result.timed_out) {
    if (limited) {
      result.elapsed_ms = std::max<double>(
          result.elapsed_ms, static_cast<double>(options.timeout.count()));
    }
  } else if (WIFEXITED(status)) {
    result.exited = true;
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.term_signal = WTERMSIG(status);
  }
  result.stderr_text.assign(err_bytes.begin(), err_bytes.end());
  return result;
}

}  // namespace fuzztune
