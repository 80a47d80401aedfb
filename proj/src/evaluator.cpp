// Copyright 2026 The akrel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "akrel/evaluator.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "akrel/errors.hpp"

namespace akrel {

SubprocessEvaluator::SubprocessEvaluator(const std::string& command) : command_(command) {
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0) throw Error(ErrorCode::kEvaluator, "pipe: " + std::string(std::strerror(errno)));
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw Error(ErrorCode::kEvaluator, "pipe: " + std::string(std::strerror(errno)));
  }
  pid_ = fork();
  if (pid_ < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    throw Error(ErrorCode::kEvaluator, "fork: " + std::string(std::strerror(errno)));
  }
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = fdopen(in_pipe[1], "w");
  from_child_ = fdopen(out_pipe[0], "r");
  if (!to_child_ || !from_child_) {
    throw Error(ErrorCode::kEvaluator, "fdopen failed for evaluator pipes");
  }
}

SubprocessEvaluator::~SubprocessEvaluator() {
  if (to_child_) std::fclose(to_child_);
  if (from_child_) std::fclose(from_child_);
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
  }
}

double SubprocessEvaluator::operator()(std::span<const double> x) {
  // A child that died makes the write raise SIGPIPE; ignore it so the
  // failure surfaces as an error instead.
  signal(SIGPIPE, SIG_IGN);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (std::fprintf(to_child_, k == 0 ? "%.17g" : " %.17g", x[k]) < 0) {
      throw Error(ErrorCode::kEvaluator, "evaluator '" + command_ + "': write failed");
    }
  }
  if (std::fputc('\n', to_child_) == EOF || std::fflush(to_child_) != 0) {
    throw Error(ErrorCode::kEvaluator, "evaluator '" + command_ + "': write failed");
  }
  std::string line;
  int c;
  while ((c = std::fgetc(from_child_)) != EOF && c != '\n') line.push_back(static_cast<char>(c));
  if (c == EOF && line.empty()) {
    throw Error(ErrorCode::kEvaluator, "evaluator '" + command_ + "' closed its output");
  }
  const auto first = line.find_first_not_of(" \t\r");
  const auto last = line.find_last_not_of(" \t\r");
  if (first == std::string::npos) {
    throw Error(ErrorCode::kEvaluator, "evaluator '" + command_ + "' returned an empty line");
  }
  const char* begin = line.data() + first;
  const char* end = line.data() + last + 1;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw Error(ErrorCode::kEvaluator,
                "evaluator '" + command_ + "' returned '" + line + "', expected one finite number");
  }
  return v;
}

}  // namespace akrel
