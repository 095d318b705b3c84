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

#include "app/model_spec.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace stretchwalk::app {
namespace {

using nlohmann::json;

[[noreturn]] void usage(const std::string& what) { fail(ErrorCode::kUsage, what); }

bool parse_number(std::string_view text, double& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

json parse_shorthand(const std::string& text) {
  json spec = json::object();
  const auto colon = text.find(':');
  spec["kind"] = text.substr(0, colon);
  if (colon == std::string::npos) return spec;
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    const std::string key = item.substr(0, eq);
    const std::string value = eq == std::string::npos ? "" : item.substr(eq + 1);
    double v = 0.0;
    if (key == "alc" || key == "almost-log-concave") {
      spec["perturbation"] = "almost-log-concave";
    } else if (key == "sin") {
      spec["perturbation"] = "sin";
      if (value.empty()) {
        v = 1.0;
      } else if (!parse_number(value, v)) {
        usage("bad sin amplitude '" + value + "'");
      }
      spec["lambda"] = v;
    } else if (key == "file") {
      spec["file"] = value;
    } else if (parse_number(value, v)) {
      spec[key] = v;
    } else {
      usage("bad model parameter '" + item + "' in '" + text + "'");
    }
  }
  return spec;
}

double number_field(const json& spec, const char* key, double fallback) {
  if (!spec.contains(key)) return fallback;
  if (!spec[key].is_number()) usage(std::string("model field '") + key + "' must be a number");
  return spec[key].get<double>();
}

struct Columns {
  std::vector<double> x, g, q;
};

Columns read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open tabulated model '" + path + "'");
  Columns c;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      if (!parse_number(cell, v)) numeric = false;
      row.push_back(v);
    }
    if (!numeric) {
      if (c.x.empty()) continue;  // header
      usage(path + ":" + std::to_string(lineno) + ": non-numeric row");
    }
    if (row.size() < 2 || row.size() > 3)
      usage(path + ":" + std::to_string(lineno) + ": expected 2 or 3 columns");
    if (width == 0) width = row.size();
    if (row.size() != width) usage(path + ":" + std::to_string(lineno) + ": ragged row");
    c.x.push_back(row[0]);
    c.g.push_back(row[1]);
    if (width == 3) c.q.push_back(row[2]);
  }
  if (c.x.empty()) usage("tabulated model '" + path + "' has no rows");
  return c;
}

}  // namespace

json normalize_model_spec(const json& spec) {
  if (spec.is_string()) return parse_shorthand(spec.get<std::string>());
  if (!spec.is_object()) usage("model must be a string or an object");
  return spec;
}

PerturbedDensity parse_model(const json& raw) {
  const json spec = normalize_model_spec(raw);
  if (!spec.contains("kind") || !spec["kind"].is_string()) usage("model needs a 'kind'");
  const auto kind = spec["kind"].get<std::string>();

  Perturbation q = NoPerturbation{};
  const std::string pert = spec.value("perturbation", std::string("none"));
  if (pert == "sin") {
    q = SinPerturbation{number_field(spec, "lambda", 1.0)};
  } else if (pert == "almost-log-concave" || pert == "alc") {
    q = AlmostLogConcavePerturbation{};
  } else if (pert != "none") {
    usage("unknown perturbation '" + pert + "'");
  }

  if (kind == "power") {
    return PerturbedDensity::create(ExponentModel::power(number_field(spec, "beta", 2.0)), q);
  }
  if (kind == "exp") return PerturbedDensity::create(ExponentModel::exponential(), q);
  if (kind == "weibull") {
    return PerturbedDensity::create(ExponentModel::weibull(number_field(spec, "k", 3.0)), q);
  }
  if (kind == "tabulated") {
    if (!spec.contains("file") || !spec["file"].is_string())
      usage("tabulated model needs a 'file'");
    const Columns c = read_table(spec["file"].get<std::string>());
    if (!c.q.empty()) {
      if (pert != "none") usage("tabulated q column conflicts with 'perturbation'");
      q = TabulatedPerturbation{c.x, c.q};
    }
    return PerturbedDensity::create(ExponentModel::tabulated(c.x, c.g), q);
  }
  usage("unknown model kind '" + kind + "'");
}

}  // namespace stretchwalk::app
