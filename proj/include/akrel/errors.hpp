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

#ifndef AKREL_ERRORS_HPP
#define AKREL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace akrel {

enum class ErrorCode {
  kInvalidArgument,
  kDomain,
  kDimensionMismatch,
  kIllConditioned,
  kDegenerateEsr,
  kConfig,
  kEvaluator,
  kIo,
};

/// Base exception for every failure raised by the library. The C API maps
/// the code onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace akrel

#endif  // AKREL_ERRORS_HPP
