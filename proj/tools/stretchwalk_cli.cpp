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

// stretchwalk command-line front end. Builds a JSON config from flags (a
// --config file wins over flags), runs it through the C API and writes the
// output files plus a <command>.meta.json sidecar with timestamps.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stretchwalk/stretchwalk.h"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitAcceptance = 3;

struct Flags {
  std::optional<std::string> model, plan, method, conditioning, config;
  std::vector<double> n, a, eps, x, criteria;
  std::optional<double> k, alpha, beta, x_max;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials, points;
  std::string out = ".";
  std::string format = "csv";
  bool oracle = false;
  bool no_baseline = false;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json list_or_scalar(const std::vector<double>& v) {
  return v.size() == 1 ? json(v.front()) : json(v);
}

json build_config(const Flags& f) {
  json cfg = json::object();
  if (f.model) cfg["model"] = f.model->starts_with('{') ? json::parse(*f.model) : json(*f.model);
  if (f.plan) cfg["plan"] = *f.plan;
  if (f.method) cfg["method"] = *f.method;
  if (f.conditioning) cfg["conditioning"] = *f.conditioning;
  if (!f.n.empty()) cfg["n"] = list_or_scalar(f.n);
  if (!f.a.empty()) cfg["a"] = list_or_scalar(f.a);
  if (!f.eps.empty()) cfg["eps"] = list_or_scalar(f.eps);
  if (!f.x.empty()) cfg["x"] = list_or_scalar(f.x);
  if (!f.criteria.empty()) cfg["criteria"] = f.criteria;
  if (f.k) cfg["k"] = *f.k;
  if (f.alpha) cfg["alpha"] = *f.alpha;
  if (f.beta) cfg["beta"] = *f.beta;
  if (f.x_max) cfg["x_max"] = *f.x_max;
  if (f.seed) cfg["seed"] = *f.seed;
  if (f.trials) cfg["trials"] = *f.trials;
  if (f.points) cfg["points"] = *f.points;
  if (f.oracle) cfg["oracle"] = true;
  if (f.no_baseline) cfg["baseline"] = false;
  cfg["format"] = f.format;
  return cfg;
}

void add_options(CLI::App* sub, const std::string& name, Flags& f) {
  sub->add_option("--seed", f.seed, "Root seed (unsigned 64-bit)");
  sub->add_option("--out", f.out, "Output directory")->capture_default_str();
  sub->add_option("--format", f.format, "Table format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--config", f.config, "JSON config file; its keys override flags");
  if (name != "conditions" && name != "verify") {
    sub->add_option("--model", f.model, "weibull:k=3, power:beta=2,sin=1, exp,alc, ...");
  }
  if (name == "bounds" || name == "localize" || name == "paths" || name == "conditions") {
    sub->add_option("--n", f.n, "Sample size(s)")->delimiter(',');
  }
  if (name == "bounds" || name == "localize" || name == "paths") {
    sub->add_option("--a", f.a, "Level(s) a")->delimiter(',');
  }
  if (name == "bounds" || name == "localize") {
    sub->add_option("--eps", f.eps, "Band half-width(s)")->delimiter(',');
  }
  if (name == "bounds") sub->add_flag("--oracle", f.oracle, "Add the brute-force infimum");
  if (name == "conditions") {
    sub->add_option("--plan", f.plan, "example1-case1, example1-case2, example2, weibull-corollary");
    sub->add_option("--beta", f.beta, "Exponent for example1-case2");
    sub->add_option("--alpha", f.alpha, "a_n = n^(1/alpha) for the inverse-power plans");
  }
  if (name == "rate") {
    sub->add_option("--x", f.x, "Tail-diagnostic points")->delimiter(',');
    sub->add_option("--x-max", f.x_max, "Upper end of the rate table");
    sub->add_option("--points", f.points, "Rate table nodes");
  }
  if (name == "localize" || name == "paths") {
    sub->add_option("--trials", f.trials, "Sampling budget / replications");
  }
  if (name == "localize") sub->add_option("--method", f.method, "gibbs or tilted-is");
  if (name == "paths") {
    sub->add_option("--k", f.k, "Window length (default floor(5 log n))");
    sub->add_option("--alpha", f.alpha, "Slope threshold");
    sub->add_option("--conditioning", f.conditioning, "at-least, equals or none");
    sub->add_flag("--no-baseline", f.no_baseline, "Skip the unconditioned baseline");
  }
  if (name == "verify") {
    sub->add_option("--criteria", f.criteria, "Subset of criterion ids")->delimiter(',');
  }
}

void print_criterion(const sw_criterion* c, void*) {
  std::fprintf(stderr, "[%s] %2d %s: %s (%.1fs)\n", c->passed ? "PASS" : "FAIL", c->id, c->title,
               c->detail, c->seconds);
}

int write_outputs(const fs::path& dir, const std::string& command, const json& config,
                  const sw_result* result) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "IoError: cannot create " << dir << ": " << ec.message() << "\n";
    return kExitNumeric;
  }
  json files = json::array();
  for (size_t i = 0; i < sw_result_file_count(result); ++i) {
    size_t len = 0;
    const char* data = sw_result_file_data(result, i, &len);
    const fs::path target = dir / sw_result_file_name(result, i);
    std::ofstream out(target, std::ios::binary);
    out.write(data, static_cast<std::streamsize>(len));
    if (!out) {
      std::cerr << "IoError: cannot write " << target << "\n";
      return kExitNumeric;
    }
    files.push_back(target.filename().string());
  }
  const json meta = {{"command", command},
                     {"version", sw_version()},
                     {"written_at", utc_now()},
                     {"config", config},
                     {"files", files},
                     {"summary", json::parse(sw_result_summary(result))}};
  std::ofstream(dir / (command + ".meta.json")) << meta.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for conditioned sums of stretched-exponential variables",
               "stretchwalk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sw_version());

  Flags flags;
  std::map<CLI::App*, std::string> names;
  const std::map<std::string, std::string> blurbs{
      {"bounds", "Closed-form localization bounds over an (n, a, eps) grid"},
      {"conditions", "Condition ratios for a preset sequence plan"},
      {"rate", "Cramer rate table and tail-equivalence diagnostics"},
      {"localize", "Monte Carlo P(I | C) over an n grid"},
      {"paths", "Conditioned paths, slope windows and P(A_k | C)"},
      {"verify", "Run the acceptance suite"}};
  for (size_t i = 0; i < sw_command_count(); ++i) {
    const std::string name = sw_command_name(i);
    CLI::App* sub = app.add_subcommand(name, blurbs.at(name));
    add_options(sub, name, flags);
    names[sub] = name;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    const auto subs = app.get_subcommands();
    std::cerr << "usage: " << e.what() << "\n\n"
              << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  const std::string command = names.at(app.get_subcommands().front());
  json config;
  try {
    config = build_config(flags);
    if (flags.config) {
      std::ifstream in(*flags.config);
      if (!in) {
        std::cerr << "usage: cannot read config file " << *flags.config << "\n";
        return kExitUsage;
      }
      const json file = json::parse(in);
      if (!file.is_object()) {
        std::cerr << "usage: config file must hold a JSON object\n";
        return kExitUsage;
      }
      for (const auto& [key, value] : file.items()) {
        if (key == "out") {
          flags.out = value.get<std::string>();
        } else {
          config[key] = value;
        }
      }
    }
  } catch (const json::exception& e) {
    std::cerr << "usage: bad JSON: " << e.what() << "\n";
    return kExitUsage;
  }

  const std::string text = config.dump();
  sw_result* result = nullptr;
  const sw_status status = command == "verify"
                               ? sw_verify(text.c_str(), print_criterion, nullptr, &result)
                               : sw_run(command.c_str(), text.c_str(), &result);
  if (status == SW_USAGE) {
    std::cerr << "usage: " << sw_last_error() << "\n\n" << app.get_subcommands().front()->help();
    return kExitUsage;
  }
  if (status != SW_OK) {
    std::cerr << sw_status_name(status) << ": " << sw_last_error() << "\n";
    return kExitNumeric;
  }

  int rc = write_outputs(flags.out, command, config, result);
  if (rc == kExitOk) {
    std::cout << sw_result_summary(result) << "\n";
    if (!sw_result_passed(result)) rc = kExitAcceptance;
  }
  sw_result_free(result);
  return rc;
}
