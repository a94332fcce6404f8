// Copyright 2026 The Authors.
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heteroim {

enum class ErrorCode {
  kMalformedRow,
  kProbabilityOutOfRange,
  kDuplicateEdge,
  kSelfLoop,
  kDanglingEndpoint,
  kNoSuchEdge,
  kEmptyInviterSet,
  kUnknownNode,
  kGraphTooLargeForEnumeration,
  kInvalidCapacity,
  kInvalidParameters,
  kEmptyGraph,
  kSameNode,
  kUniverseMismatch,
  kInfeasibleConfig,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this type. `code()` tells
// validation problems apart from I/O problems (the CLI maps them to exit
// codes 1 and 2).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  bool is_io() const noexcept { return code_ == ErrorCode::kIo; }

 private:
  ErrorCode code_;
};

}  // namespace heteroim
