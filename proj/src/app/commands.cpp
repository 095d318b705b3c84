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

#include "app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "app/acceptance.hpp"
#include "app/io.hpp"
#include "app/model_spec.hpp"
#include "core/conditions.hpp"
#include "core/errors.hpp"
#include "core/paths.hpp"
#include "core/ratefn.hpp"
#include "core/rng.hpp"
#include "core/sampler.hpp"
#include "core/variational.hpp"

namespace stretchwalk::app {
namespace {

using nlohmann::json;

[[noreturn]] void usage(const std::string& what) { fail(ErrorCode::kUsage, what); }

// Typed, strict view of a command's config object.
class Config {
 public:
  Config(const json& j, std::initializer_list<const char*> known) : j_(j) {
    if (!j.is_object()) usage("config must be a JSON object");
    std::set<std::string> allowed{"seed", "format"};
    for (const char* k : known) allowed.insert(k);
    for (const auto& [key, value] : j.items()) {
      if (!allowed.count(key)) usage("unknown config key '" + key + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key) && !j_[key].is_null(); }
  const json& raw(const char* key) const { return j_[key]; }

  std::uint64_t seed() const {
    if (!has("seed")) return 1;
    const json& s = j_["seed"];
    if (s.is_number_unsigned()) return s.get<std::uint64_t>();
    if (s.is_number_integer() && s.get<std::int64_t>() >= 0) return s.get<std::uint64_t>();
    if (s.is_string()) {
      const std::string text = s.get<std::string>();
      std::size_t used = 0;
      try {
        const auto v = std::stoull(text, &used, 0);
        if (used == text.size()) return v;
      } catch (const std::exception&) {
      }
    }
    usage("seed must be an unsigned 64-bit integer");
  }

  Format format() const { return parse_format(string("format", "csv")); }

  double number(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    if (!j_[key].is_number()) usage(std::string("'") + key + "' must be a number");
    return j_[key].get<double>();
  }

  std::vector<double> numbers(const char* key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_[key];
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array() || v.empty()) usage(std::string("'") + key + "' must be a number or a list");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) usage(std::string("'") + key + "' must hold numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<std::size_t> sizes(const char* key, std::vector<std::size_t> fallback) const {
    if (!has(key)) return fallback;
    std::vector<std::size_t> out;
    for (double v : numbers(key, {})) {
      if (!(v >= 1.0) || v != std::floor(v) || v > 1e12)
        usage(std::string("'") + key + "' must hold positive integers");
      out.push_back(static_cast<std::size_t>(v));
    }
    return out;
  }

  std::size_t size(const char* key, std::size_t fallback) const {
    const auto v = sizes(key, {fallback});
    if (v.size() != 1) usage(std::string("'") + key + "' must be a single integer");
    return v.front();
  }

  std::string string(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    if (!j_[key].is_string()) usage(std::string("'") + key + "' must be a string");
    return j_[key].get<std::string>();
  }

  bool flag(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!j_[key].is_boolean()) usage(std::string("'") + key + "' must be true or false");
    return j_[key].get<bool>();
  }

  PerturbedDensity model(const char* fallback) const {
    return parse_model(has("model") ? j_["model"] : json(fallback));
  }

 private:
  const json& j_;
};

std::string file_name(const std::string& stem, Format f) { return stem + format_extension(f); }

json trend_json(const TrendVerdict& v) {
  const char* name = v.trend == Trend::kDecreasing   ? "decreasing"
                     : v.trend == Trend::kIncreasing ? "increasing"
                                                     : "flat";
  return {{"trend", name}, {"slope", v.slope}, {"p_value", v.p_value}, {"monotone", v.monotone}};
}

// ---------------------------------------------------------------------------

RunResult run_bounds(const json& raw) {
  const Config cfg(raw, {"model", "n", "a", "eps", "oracle"});
  const auto model = cfg.model("weibull:k=3");
  const auto ns = cfg.sizes("n", {2, 3, 4});
  const auto as = cfg.numbers("a", {2.0, 3.0, 5.0});
  const auto epss = cfg.numbers("eps", {0.5});
  const bool oracle = cfg.flag("oracle", false);

  std::vector<std::string> cols{"n",   "a", "eps", "f_g1", "f_g2", "i_icc",           "i_c",
                                "H",   "G", "tau", "log_prob_c_lower", "log_prob_icc_upper"};
  if (oracle) {
    cols.insert(cols.end(), {"oracle_i_icc", "oracle_rel_err", "oracle_grid"});
  }
  Table table(cols);
  double worst = 0.0;
  for (std::size_t n : ns) {
    for (double a : as) {
      for (double eps : epss) {
        const BandEvent ev{n, a, eps};
        validate_band(model.base(), ev);
        const auto b = closed_form_bounds(model.base(), ev);
        std::vector<Table::Cell> row{static_cast<std::int64_t>(n), a, eps, b.f_g1, b.f_g2,
                                     b.i_icc, b.i_c, b.H, b.G, b.tau,
                                     log_prob_c_lower(model, ev), log_prob_icc_upper(model, ev)};
        if (oracle) {
          const auto bf = brute_force_infimum(model, ev, Region::kIccC);
          const double rel = std::fabs(b.i_icc - bf.value) / std::fabs(bf.value);
          worst = std::max(worst, rel);
          row.insert(row.end(), {bf.value, rel, static_cast<std::int64_t>(bf.grid)});
        }
        table.add_row(std::move(row));
      }
    }
  }
  const auto seed = cfg.seed();
  const auto fmt = cfg.format();
  RunResult r;
  r.files.push_back({file_name("bounds", fmt), table.render(fmt, seed)});
  r.summary = {{"command", "bounds"}, {"seed", seed}, {"model", model.describe()},
               {"rows", table.rows().size()}};
  if (oracle) r.summary["max_oracle_rel_err"] = worst;
  return r;
}

RunResult run_conditions(const json& raw) {
  const Config cfg(raw, {"plan", "beta", "alpha", "n"});
  const std::string plan_name = cfg.string("plan", "example1-case2");
  static const std::set<std::string> plans{"example1-case1", "example1-case2", "example2",
                                           "weibull-corollary"};
  if (!plans.count(plan_name)) usage("unknown plan '" + plan_name + "'");
  const auto preset = plan_preset(plan_name, cfg.number("beta", 0.0), cfg.number("alpha", 0.0));
  const auto ns = cfg.sizes("n", default_n_grid());
  const auto report = evaluate_conditions(preset.g, preset.plan, ns);

  Table table({"n", "a", "eps", "ratio_growth", "ratio_t1", "ratio32", "ratio33", "H", "G",
               "degenerate"});
  for (const auto& row : report.rows) {
    table.add_row({static_cast<std::int64_t>(row.n), row.a, row.eps, row.ratio_growth,
                   row.ratio_t1, row.ratio32, row.ratio33, row.H, row.G,
                   static_cast<std::int64_t>(row.degenerate)});
  }
  const auto seed = cfg.seed();
  const auto fmt = cfg.format();
  json verdict = {{"seed", seed},
                  {"plan", plan_name},
                  {"sequence", preset.plan.describe()},
                  {"g", preset.g.name()},
                  {"growth", report.growth},
                  {"ratio32", trend_json(report.c32)},
                  {"ratio33", trend_json(report.c33)},
                  {"final_ratio32", report.final_ratio32}};
  RunResult r;
  r.files.push_back({file_name("conditions", fmt), table.render(fmt, seed)});
  r.files.push_back({"conditions_summary.json", dump_json(verdict)});
  r.summary = verdict;
  r.summary["command"] = "conditions";
  return r;
}

RunResult run_rate(const json& raw) {
  const Config cfg(raw, {"model", "x", "x_max", "points"});
  const auto model = cfg.model("weibull:k=3");
  const double ex = model.mean();
  const auto xs = cfg.numbers("x", {5.0 * ex, 10.0 * ex, 20.0 * ex});
  const double x_max = cfg.number("x_max", *std::max_element(xs.begin(), xs.end()));
  if (!(x_max > 1.05 * ex)) usage("x_max must exceed 1.05 E X = " + format_double(1.05 * ex));
  const auto table = RateTable::build(model, x_max, cfg.size("points", 128));
  const auto check = audit(model, table);

  Table nodes({"x", "rate", "t_star"});
  for (const auto& p : table.nodes()) nodes.add_row({p.x, p.rate, p.t_star});

  Table tail({"x", "rate", "neg_log_survival", "ratio", "abs_dev"});
  bool decreasing = true;
  double prev = HUGE_VAL;
  for (double x : xs) {
    const double rate = cramer_rate(model, x).rate;
    const double ratio = tail_equivalence(model, x);
    const double dev = std::fabs(ratio - 1.0);
    decreasing = decreasing && dev < prev;
    prev = dev;
    tail.add_row({x, rate, ratio * rate, ratio, dev});
  }

  const auto seed = cfg.seed();
  const auto fmt = cfg.format();
  json digest = {{"seed", seed},
                 {"model", model.describe()},
                 {"mean", ex},
                 {"convex", check.convex},
                 {"nonnegative", check.nonnegative},
                 {"t_star_monotone", check.t_star_monotone},
                 {"rate_at_mean", check.rate_at_mean},
                 {"max_duality_error", check.max_duality_error},
                 {"max_derivative_error", check.max_derivative_error},
                 {"tail_deviation_decreasing", decreasing}};
  RunResult r;
  r.files.push_back({file_name("rate", fmt), nodes.render(fmt, seed)});
  r.files.push_back({file_name("rate_tail", fmt), tail.render(fmt, seed)});
  r.files.push_back({"rate_summary.json", dump_json(digest)});
  r.summary = digest;
  r.summary["command"] = "rate";
  return r;
}

Method parse_method(const std::string& name) {
  if (name == "gibbs" || name == "fixed-sum-gibbs") return Method::kFixedSumGibbs;
  if (name == "is" || name == "tilted-is") return Method::kTiltedIS;
  usage("method must be gibbs or tilted-is, got '" + name + "'");
}

RunResult run_localize(const json& raw) {
  const Config cfg(raw, {"model", "n", "a", "eps", "method", "trials"});
  const auto model = cfg.model("power:beta=3");
  const auto ns = cfg.sizes("n", {5, 10, 20});
  auto as = cfg.numbers("a", {3.0, 4.0, 5.0});
  if (as.size() == 1) as.assign(ns.size(), as.front());
  if (as.size() != ns.size()) usage("'a' must be a single value or match the length of 'n'");
  // Without an explicit eps the band shrinks as 1/log a.
  std::vector<double> epss;
  if (cfg.has("eps")) {
    epss = cfg.numbers("eps", {});
    if (epss.size() == 1) epss.assign(ns.size(), epss.front());
    if (epss.size() != ns.size()) usage("'eps' must be a single value or match 'n'");
  } else {
    for (double a : as) epss.push_back(1.0 / std::log(a));
  }
  const Method method = parse_method(cfg.string("method", "gibbs"));
  const std::size_t trials = cfg.size("trials", 4000);
  const auto seed = cfg.seed();

  Table table({"n", "a", "eps", "method", "p_hat", "std_err", "n_eff", "replications"});
  std::vector<double> p;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto est = estimate_localization(model, ns[i], as[i], epss[i], method, trials,
                                           derive_seed(seed, i));
    p.push_back(est.p_hat);
    table.add_row({static_cast<std::int64_t>(ns[i]), as[i], epss[i],
                   std::string(method_name(method)), est.p_hat, est.std_err, est.n_eff,
                   static_cast<std::int64_t>(est.replications)});
  }
  bool increasing = true;
  for (std::size_t i = 1; i < p.size(); ++i) increasing = increasing && p[i] > p[i - 1];

  const auto fmt = cfg.format();
  RunResult r;
  r.files.push_back({file_name("localize", fmt), table.render(fmt, seed)});
  r.summary = {{"command", "localize"},
               {"seed", seed},
               {"model", model.describe()},
               {"method", method_name(method)},
               {"p_hat", p},
               {"strictly_increasing", increasing}};
  return r;
}

Conditioning parse_conditioning(const std::string& name) {
  if (name == "at-least" || name == "end-at-least") return Conditioning::kEndAtLeast;
  if (name == "equals" || name == "end-equals") return Conditioning::kEndEquals;
  if (name == "none") return Conditioning::kNone;
  usage("conditioning must be at-least, equals or none, got '" + name + "'");
}

RunResult run_paths(const json& raw) {
  const Config cfg(raw, {"model", "n", "a", "k", "alpha", "conditioning", "trials", "baseline"});
  const auto model = cfg.model("weibull:k=3");
  const double ex = model.mean();
  const auto ns = cfg.sizes("n", {500, 1000, 2000});
  const double a = cfg.number("a", 1.5 * ex);
  const double alpha = cfg.number("alpha", 2.0 * ex);
  const Conditioning cond = parse_conditioning(cfg.string("conditioning", "at-least"));
  const std::size_t replications = cfg.size("trials", 200);
  const bool baseline = cfg.flag("baseline", true);
  const auto seed = cfg.seed();
  auto window = [&](std::size_t n) {
    if (cfg.has("k")) return cfg.size("k", 1);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(
                                        5.0 * std::log(static_cast<double>(n)))));
  };

  std::vector<std::string> cols{"n", "k", "alpha", "p_hat", "std_err", "n_eff"};
  if (baseline) cols.insert(cols.end(), {"baseline_p_hat", "baseline_std_err"});
  Table pak(cols);
  json estimates = json::array();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const std::size_t n = ns[i];
    const std::size_t k = window(n);
    const auto run_seed = derive_seed(seed, i);
    const auto est = estimate_p_ak(model, n, a, k, alpha, replications, run_seed, cond);
    std::vector<Table::Cell> row{static_cast<std::int64_t>(n), static_cast<std::int64_t>(k),
                                 alpha, est.p_hat, est.std_err, est.n_eff};
    json e = {{"n", n}, {"k", k}, {"p_hat", est.p_hat}, {"std_err", est.std_err}};
    if (baseline) {
      const auto base = estimate_p_ak(model, n, a, k, alpha, replications, run_seed,
                                      Conditioning::kNone);
      row.insert(row.end(), {base.p_hat, base.std_err});
      e["baseline_p_hat"] = base.p_hat;
    }
    pak.add_row(std::move(row));
    estimates.push_back(std::move(e));
  }

  // Replication 0 of the last n, shown in full.
  const std::size_t n = ns.back();
  const std::size_t k = window(n);
  const PathSimulator sim(model, n, a, cond);
  const Trajectory path = sim.draw(derive_seed(derive_seed(seed, ns.size() - 1), 0));
  Table traj({"j", "increment", "partial_sum"});
  for (std::size_t j = 0; j < n; ++j)
    traj.add_row({static_cast<std::int64_t>(j + 1), path.increments[j], path.partial_sums[j]});
  const SegmentReport seg = detect_segments(path, k, alpha);
  Table slopes({"j", "delta"});
  for (std::size_t j = 0; j < seg.slopes.size(); ++j)
    slopes.add_row({static_cast<std::int64_t>(j), seg.slopes[j]});
  const json segments = {{"seed", seed},
                         {"n", n},
                         {"a", a},
                         {"conditioning", conditioning_name(cond)},
                         {"k", seg.k},
                         {"alpha", seg.alpha},
                         {"argmax_j", seg.argmax_j},
                         {"max_slope", seg.max_slope},
                         {"a_k_event", seg.a_k_event},
                         {"note", path.note}};

  const auto fmt = cfg.format();
  RunResult r;
  r.files.push_back({file_name("paths_pak", fmt), pak.render(fmt, seed)});
  r.files.push_back({file_name("trajectory", fmt), traj.render(fmt, seed)});
  r.files.push_back({file_name("slopes", fmt), slopes.render(fmt, seed)});
  r.files.push_back({"segments.json", dump_json(segments)});
  r.summary = {{"command", "paths"},   {"seed", seed},       {"model", model.describe()},
               {"a", a},               {"alpha", alpha},     {"conditioning", conditioning_name(cond)},
               {"estimates", estimates}};
  return r;
}

}  // namespace

RunResult run_verify(const json& raw, const CriterionCallback& on_done) {
  const Config cfg(raw, {"criteria"});
  std::vector<int> ids;
  if (cfg.has("criteria")) {
    for (std::size_t id : cfg.sizes("criteria", {})) {
      if (id > static_cast<std::size_t>(criterion_count()))
        usage("criteria ids run from 1 to " + std::to_string(criterion_count()));
      ids.push_back(static_cast<int>(id));
    }
  }
  const auto seed = cfg.seed();
  const auto results = run_acceptance(ids, seed, on_done);
  json rows = json::array();
  json timed = json::array();
  bool all = true;
  for (const auto& c : results) {
    all = all && c.passed;
    json row = {{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"detail", c.detail}};
    rows.push_back(row);
    row["seconds"] = c.seconds;
    timed.push_back(std::move(row));
  }
  RunResult r;
  r.passed = all;
  r.files.push_back({"acceptance.json",
                     dump_json({{"seed", seed}, {"passed", all}, {"criteria", rows}})});
  r.summary = {{"command", "verify"}, {"seed", seed}, {"passed", all}, {"criteria", timed}};
  return r;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"bounds", "conditions", "rate",
                                              "localize", "paths", "verify"};
  return names;
}

RunResult run_command(const std::string& command, const json& config) {
  const json cfg = config.is_null() ? json::object() : config;
  if (command == "bounds") return run_bounds(cfg);
  if (command == "conditions") return run_conditions(cfg);
  if (command == "rate") return run_rate(cfg);
  if (command == "localize") return run_localize(cfg);
  if (command == "paths") return run_paths(cfg);
  if (command == "verify") return run_verify(cfg, {});
  usage("unknown command '" + command + "'");
}

}  // namespace stretchwalk::app
