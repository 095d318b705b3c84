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

#include <string>
#include <vector>

#include <json.hpp>

#include "app/acceptance.hpp"

namespace stretchwalk::app {

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunResult {
  std::vector<OutputFile> files;
  /// Machine-readable digest of the run. It may hold wall-clock runtimes,
  /// so it is kept out of `files`.
  nlohmann::json summary;
  /// False only when `verify` finds a failing criterion.
  bool passed = true;
};

/// bounds, conditions, rate, localize, paths, verify.
const std::vector<std::string>& command_names();

/// Runs one subcommand on a JSON config object. Output files depend only on
/// the config, byte for byte. Unknown commands, unknown keys and ill-typed
/// values throw UsageError; numeric failures propagate as Error.
RunResult run_command(const std::string& command, const nlohmann::json& config);

/// The `verify` command with a per-criterion progress callback.
RunResult run_verify(const nlohmann::json& config, const CriterionCallback& on_done);

}  // namespace stretchwalk::app
