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

#include <json.hpp>

#include "core/density.hpp"

namespace stretchwalk::app {

/// Builds a density from either a JSON object
///   {"kind": "power"|"exp"|"weibull"|"tabulated", "beta": .., "k": ..,
///    "file": .., "perturbation": "none"|"sin"|"almost-log-concave",
///    "lambda": ..}
/// or the shorthand "kind[:key=value,...]", e.g. "weibull:k=3",
/// "power:beta=2,sin=0.5", "power:beta=3,alc", "tabulated:file=g.csv".
///
/// A tabulated file holds rows "x,g[,q]"; blank lines, '#' comments and a
/// non-numeric header row are skipped. A third column becomes a tabulated
/// perturbation. Malformed specs throw UsageError.
PerturbedDensity parse_model(const nlohmann::json& spec);

/// The JSON object form of a shorthand string (objects pass through).
nlohmann::json normalize_model_spec(const nlohmann::json& spec);

}  // namespace stretchwalk::app
