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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace stretchwalk::app {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;  // deterministic for a given seed
  double seconds = 0.0;
};

using CriterionCallback = std::function<void(const CriterionResult&)>;

/// Number of acceptance criteria; ids run from 1 to this.
int criterion_count();

/// Runs the listed criteria (all when `ids` is empty) in id order. The
/// callback fires as each one finishes. A numeric error inside a criterion
/// is recorded as a failure of that criterion, not thrown.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, std::uint64_t seed,
                                            const CriterionCallback& on_done = {});

}  // namespace stretchwalk::app
