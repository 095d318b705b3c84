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
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace stretchwalk::app {

enum class Format { kCsv, kJson };

Format parse_format(const std::string& name);
const char* format_extension(Format f);

/// Round-trippable text for a double: 17 significant digits, "nan"/"inf"
/// spelled out.
std::string format_double(double v);

/// A result table with a fixed column order. Cells hold integers, doubles
/// or strings; CSV and JSON renderings carry the same values.
class Table {
 public:
  using Cell = std::variant<std::int64_t, double, std::string>;

  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  /// "# seed=<seed>" header line, then the column names, then the rows.
  std::string to_csv(std::uint64_t seed) const;
  /// {"seed": .., "columns": [..], "rows": [{column: value, ..}, ..]}.
  nlohmann::json to_json(std::uint64_t seed) const;
  std::string render(Format f, std::uint64_t seed) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Stable JSON text: two-space indent, trailing newline. Non-finite doubles
/// become the strings "nan", "inf", "-inf" rather than null.
std::string dump_json(const nlohmann::json& j);

/// Replaces non-finite numbers by their string spelling, recursively.
nlohmann::json sanitize(const nlohmann::json& j);

}  // namespace stretchwalk::app
