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

#include "core/errors.hpp"

namespace stretchwalk {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kNonIntegrable: return "NonIntegrable";
    case ErrorCode::kOutOfSupport: return "OutOfSupport";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kEnvelopeViolated: return "EnvelopeViolated";
    case ErrorCode::kThresholdNotFound: return "ThresholdNotFound";
    case ErrorCode::kDegeneratePlan: return "DegeneratePlan";
    case ErrorCode::kNotAchievable: return "NotAchievable";
    case ErrorCode::kDivergent: return "Divergent";
    case ErrorCode::kNoRoot: return "NoRoot";
    case ErrorCode::kDegenerateWeights: return "DegenerateWeights";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kBadWindow: return "BadWindow";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kUsage: return "UsageError";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace stretchwalk
