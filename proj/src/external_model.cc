// Copyright 2026 The FAE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "fae/error.h"
#include "fae/models.h"

namespace fae {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

// Child process with its stdin and stdout bound to one end of a socket pair.
// A socket instead of pipes lets writes use MSG_NOSIGNAL, so a dead child
// surfaces as an error rather than SIGPIPE.
class ChildProcess {
 public:
  explicit ChildProcess(const std::string& command) {
    int fds[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
      throw Error(ErrorKind::kModel, std::string("socketpair failed: ") + std::strerror(errno));
    }
    pid_ = ::fork();
    if (pid_ < 0) {
      ::close(fds[0]);
      ::close(fds[1]);
      throw Error(ErrorKind::kModel, std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid_ == 0) {
      ::dup2(fds[1], STDIN_FILENO);
      ::dup2(fds[1], STDOUT_FILENO);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(fds[1]);
    fd_ = fds[0];
  }

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  ~ChildProcess() {
    if (fd_ >= 0) {
      ::shutdown(fd_, SHUT_WR);
    }
    // Give the child a moment to exit on EOF before escalating.
    int status = 0;
    bool reaped = reaped_;
    for (int i = 0; i < 50 && !reaped; ++i) {
      reaped = ::waitpid(pid_, &status, WNOHANG) == pid_;
      if (!reaped) std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    if (!reaped) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
    if (fd_ >= 0) ::close(fd_);
  }

  // " (exited with status N)" once the child is gone, else empty. Waits
  // briefly since a failed write usually races the child's exit.
  std::string exit_note() {
    for (int i = 0; i < 20 && !reaped_; ++i) {
      reaped_ = ::waitpid(pid_, &exit_status_, WNOHANG) == pid_;
      if (!reaped_) std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    if (!reaped_) return "";
    if (WIFEXITED(exit_status_)) {
      return " (exited with status " + std::to_string(WEXITSTATUS(exit_status_)) + ")";
    }
    if (WIFSIGNALED(exit_status_)) {
      return " (killed by signal " + std::to_string(WTERMSIG(exit_status_)) + ")";
    }
    return "";
  }

  void write_line(const std::string& line, Clock::time_point deadline) {
    std::size_t off = 0;
    while (off < line.size()) {
      wait_for(POLLOUT, deadline);
      const ssize_t n = ::send(fd_, line.data() + off, line.size() - off, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw Error(ErrorKind::kModel,
                    std::string("external model: write failed: ") + std::strerror(errno));
      }
      off += static_cast<std::size_t>(n);
    }
  }

  std::string read_line(Clock::time_point deadline) {
    for (;;) {
      if (auto pos = buffer_.find('\n'); pos != std::string::npos) {
        std::string line = buffer_.substr(0, pos);
        buffer_.erase(0, pos + 1);
        return line;
      }
      wait_for(POLLIN, deadline);
      char chunk[65536];
      const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw Error(ErrorKind::kModel,
                    std::string("external model: read failed: ") + std::strerror(errno));
      }
      if (n == 0) throw Error(ErrorKind::kModel, "external model closed its output");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  void wait_for(short events, Clock::time_point deadline) {
    for (;;) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - Clock::now());
      if (left.count() <= 0) throw Error(ErrorKind::kModel, "external model timed out");
      pollfd p{fd_, events, 0};
      const int rc = ::poll(&p, 1, static_cast<int>(left.count()));
      if (rc < 0 && errno == EINTR) continue;
      if (rc < 0) {
        throw Error(ErrorKind::kModel, std::string("poll failed: ") + std::strerror(errno));
      }
      if (rc == 0) throw Error(ErrorKind::kModel, "external model timed out");
      if (p.revents & (events | POLLHUP | POLLERR)) return;
    }
  }

  pid_t pid_ = -1;
  int fd_ = -1;
  bool reaped_ = false;
  int exit_status_ = 0;
  std::string buffer_;
};

class ExternalModel final : public Model {
 public:
  ExternalModel(const std::string& command, FeatureSchema schema, ExternalOptions options)
      : Model(std::move(schema)), command_(command), options_(options), child_(command) {}

  std::string describe() const override { return "external(" + command_ + ")"; }

 protected:
  void predict_rows(std::span<const FeatureVector> batch,
                    std::span<double> out) const override {
    if (batch.empty()) return;
    std::lock_guard lock(mu_);
    const auto id = next_id_++;
    json request = {{"id", id}, {"inputs", json::array()}};
    for (const auto& row : batch) request["inputs"].push_back(row);
    const auto deadline = Clock::now() + options_.timeout;
    std::string line;
    try {
      child_.write_line(request.dump() + "\n", deadline);
      line = child_.read_line(deadline);
    } catch (const Error& e) {
      throw Error(e.kind(), e.what() + child_.exit_note());
    }
    json response;
    try {
      response = json::parse(line);
    } catch (const json::parse_error&) {
      throw Error(ErrorKind::kModel, "external model: malformed response line");
    }
    if (!response.is_object() || !response.contains("id") || !response.contains("outputs")) {
      throw Error(ErrorKind::kModel, "external model: response lacks id/outputs");
    }
    if (!response["id"].is_number_integer() || response["id"].get<std::int64_t>() != id) {
      throw Error(ErrorKind::kModel, "external model: response id does not match request " +
                                         std::to_string(id));
    }
    const auto& outputs = response["outputs"];
    if (!outputs.is_array() || outputs.size() != batch.size()) {
      throw Error(ErrorKind::kModel, "external model: expected " +
                                         std::to_string(batch.size()) + " outputs");
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (!outputs[i].is_number()) {
        throw Error(ErrorKind::kModel, "external model: non-numeric output");
      }
      out[i] = outputs[i].get<double>();
    }
  }

 private:
  std::string command_;
  ExternalOptions options_;
  mutable std::mutex mu_;
  mutable std::int64_t next_id_ = 0;
  mutable ChildProcess child_;
};

}  // namespace

ModelHandle load_external(const std::string& command, FeatureSchema schema,
                          ExternalOptions options) {
  if (command.empty()) throw Error(ErrorKind::kConfig, "empty external model command");
  return std::make_shared<ExternalModel>(command, std::move(schema), options);
}

}  // namespace fae
