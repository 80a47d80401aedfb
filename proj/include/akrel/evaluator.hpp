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

#ifndef AKREL_EVALUATOR_HPP
#define AKREL_EVALUATOR_HPP

#include <cstdio>
#include <span>
#include <string>
#include <sys/types.h>

namespace akrel {

/// Limit state served by a child process.
///
/// The command runs under /bin/sh -c. For every evaluation one line with the
/// whitespace-separated input vector is written to its stdin and one line
/// holding a single number is read back from its stdout. Not thread-safe;
/// use one instance per thread.
class SubprocessEvaluator {
 public:
  explicit SubprocessEvaluator(const std::string& command);
  ~SubprocessEvaluator();
  SubprocessEvaluator(const SubprocessEvaluator&) = delete;
  SubprocessEvaluator& operator=(const SubprocessEvaluator&) = delete;

  /// Throws Error(kEvaluator) if the child exits, closes its output or
  /// answers with something other than one finite number.
  double operator()(std::span<const double> x);

 private:
  std::string command_;
  pid_t pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
};

}  // namespace akrel

#endif  // AKREL_EVALUATOR_HPP
