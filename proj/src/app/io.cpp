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

#include "app/io.hpp"

#include <cmath>
#include <cstdio>

#include "core/errors.hpp"

namespace stretchwalk::app {

using nlohmann::json;

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  fail(ErrorCode::kUsage, "format must be csv or json, got '" + name + "'");
}

const char* format_extension(Format f) { return f == Format::kCsv ? ".csv" : ".json"; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Table::add_row(std::vector<Cell> row) {
  require(row.size() == columns_.size(), ErrorCode::kInternal, "row width mismatch");
  rows_.push_back(std::move(row));
}

std::string Table::to_csv(std::uint64_t seed) const {
  std::string out = "# seed=" + std::to_string(seed) + "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + columns_[i];
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              out += format_double(v);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
              out += std::to_string(v);
            } else {
              out += v;
            }
          },
          row[i]);
    }
    out += '\n';
  }
  return out;
}

json Table::to_json(std::uint64_t seed) const {
  json rows = json::array();
  for (const auto& row : rows_) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i)
      std::visit([&](const auto& v) { obj[columns_[i]] = v; }, row[i]);
    rows.push_back(std::move(obj));
  }
  return {{"seed", seed}, {"columns", columns_}, {"rows", std::move(rows)}};
}

std::string Table::render(Format f, std::uint64_t seed) const {
  return f == Format::kCsv ? to_csv(seed) : dump_json(to_json(seed));
}

json sanitize(const json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    return std::isfinite(v) ? j : json(format_double(v));
  }
  if (j.is_array()) {
    json out = json::array();
    for (const auto& e : j) out.push_back(sanitize(e));
    return out;
  }
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : j.items()) out[k] = sanitize(v);
    return out;
  }
  return j;
}

std::string dump_json(const json& j) { return sanitize(j).dump(2) + "\n"; }

}  // namespace stretchwalk::app
