// Copyright 2026 The stretchwalk Authors
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

namespace stretchwalk {

// Numeric values are part of the C ABI (see stretchwalk.h); append only.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kInvalidModel = 2,
  kNonIntegrable = 3,
  kOutOfSupport = 4,
  kDomainError = 5,
  kNoConvergence = 6,
  kEnvelopeViolated = 7,
  kThresholdNotFound = 8,
  kDegeneratePlan = 9,
  kNotAchievable = 10,
  kDivergent = 11,
  kNoRoot = 12,
  kDegenerateWeights = 13,
  kBudgetExceeded = 14,
  kBadWindow = 15,
  kIoError = 16,
  kUsage = 17,
  kInternal = 99,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace stretchwalk
