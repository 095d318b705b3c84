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

#include "stretchwalk/stretchwalk.h"

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "app/commands.hpp"
#include "app/model_spec.hpp"
#include "core/errors.hpp"
#include "core/paths.hpp"
#include "core/ratefn.hpp"
#include "core/sampler.hpp"
#include "core/variational.hpp"

struct sw_model {
  stretchwalk::PerturbedDensity density;
  std::string description;
};

struct sw_path {
  stretchwalk::Trajectory trajectory;
};

struct sw_result {
  stretchwalk::app::RunResult run;
  std::string summary;
};

namespace {

using stretchwalk::Error;
using stretchwalk::ErrorCode;

thread_local std::string last_error;

sw_status record(ErrorCode code, const std::string& what) {
  last_error = what;
  return static_cast<sw_status>(code);
}

// Runs body, turning every exception into a status and a message.
template <class Body>
sw_status guarded(Body&& body) {
  try {
    body();
    return SW_OK;
  } catch (const Error& e) {
    return record(e.code(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return record(ErrorCode::kUsage, std::string("bad JSON: ") + e.what());
  } catch (const std::bad_alloc&) {
    return record(ErrorCode::kInternal, "out of memory");
  } catch (const std::exception& e) {
    return record(ErrorCode::kInternal, e.what());
  } catch (...) {
    return record(ErrorCode::kInternal, "unknown exception");
  }
}

sw_status null_argument(const char* name) {
  return record(ErrorCode::kInvalidArgument, std::string(name) + " must not be NULL");
}

nlohmann::json parse_config(const char* config_json) {
  if (config_json == nullptr || *config_json == '\0') return nlohmann::json::object();
  return nlohmann::json::parse(config_json);
}

}  // namespace

extern "C" {

const char* sw_version(void) { return STRETCHWALK_VERSION; }

const char* sw_status_name(sw_status status) {
  return stretchwalk::error_name(static_cast<ErrorCode>(status)).data();
}

const char* sw_last_error(void) { return last_error.c_str(); }

sw_status sw_model_create(const char* spec, sw_model** out) {
  if (spec == nullptr) return null_argument("spec");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const std::string text(spec);
    const auto parsed = !text.empty() && text.front() == '{' ? nlohmann::json::parse(text)
                                                             : nlohmann::json(text);
    auto density = stretchwalk::app::parse_model(parsed);
    std::string description = density.describe();
    *out = new sw_model{std::move(density), std::move(description)};
  });
}

void sw_model_free(sw_model* model) { delete model; }

const char* sw_model_describe(const sw_model* model) {
  return model ? model->description.c_str() : "";
}

sw_status sw_model_mean(const sw_model* model, double* out) {
  if (model == nullptr) return null_argument("model");
  if (out == nullptr) return null_argument("out");
  *out = model->density.mean();
  return SW_OK;
}

sw_status sw_model_log_density(const sw_model* model, double x, double* out) {
  if (model == nullptr) return null_argument("model");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = model->density.log_density(x); });
}

sw_status sw_bounds_compute(const sw_model* model, size_t n, double a, double eps,
                            sw_bounds* out) {
  if (model == nullptr) return null_argument("model");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const stretchwalk::BandEvent ev{n, a, eps};
    stretchwalk::validate_band(model->density.base(), ev);
    const auto b = stretchwalk::closed_form_bounds(model->density.base(), ev);
    *out = {b.f_g1, b.f_g2, b.i_icc, b.i_c, b.H, b.G, b.tau};
  });
}

sw_status sw_rate(const sw_model* model, double x, double* rate, double* t_star) {
  if (model == nullptr) return null_argument("model");
  return guarded([&] {
    const auto p = stretchwalk::cramer_rate(model->density, x);
    if (rate) *rate = p.rate;
    if (t_star) *t_star = p.t_star;
  });
}

sw_status sw_localize(const sw_model* model, size_t n, double a, double eps, sw_method method,
                      size_t budget, uint64_t seed, sw_estimate* out) {
  if (model == nullptr) return null_argument("model");
  if (out == nullptr) return null_argument("out");
  if (method != SW_METHOD_TILTED_IS && method != SW_METHOD_FIXED_SUM_GIBBS)
    return record(ErrorCode::kInvalidArgument, "unknown method");
  return guarded([&] {
    const auto m = method == SW_METHOD_TILTED_IS ? stretchwalk::Method::kTiltedIS
                                                 : stretchwalk::Method::kFixedSumGibbs;
    const auto e = stretchwalk::estimate_localization(model->density, n, a, eps, m, budget, seed);
    *out = {e.p_hat, e.std_err, e.n_eff, e.replications};
  });
}

sw_status sw_path_simulate(const sw_model* model, size_t n, double a,
                           sw_conditioning conditioning, uint64_t seed, sw_path** out) {
  if (model == nullptr) return null_argument("model");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  stretchwalk::Conditioning c;
  switch (conditioning) {
    case SW_END_AT_LEAST: c = stretchwalk::Conditioning::kEndAtLeast; break;
    case SW_END_EQUALS: c = stretchwalk::Conditioning::kEndEquals; break;
    case SW_UNCONDITIONED: c = stretchwalk::Conditioning::kNone; break;
    default: return record(ErrorCode::kInvalidArgument, "unknown conditioning");
  }
  return guarded([&] {
    *out = new sw_path{stretchwalk::simulate_conditioned_path(model->density, n, a, c, seed)};
  });
}

void sw_path_free(sw_path* path) { delete path; }

size_t sw_path_length(const sw_path* path) {
  return path ? path->trajectory.increments.size() : 0;
}

const double* sw_path_increments(const sw_path* path) {
  return path ? path->trajectory.increments.data() : nullptr;
}

const double* sw_path_partial_sums(const sw_path* path) {
  return path ? path->trajectory.partial_sums.data() : nullptr;
}

sw_status sw_path_max_slope(const sw_path* path, size_t k, double* max_slope,
                            size_t* argmax_j) {
  if (path == nullptr) return null_argument("path");
  return guarded([&] {
    const auto r = stretchwalk::detect_segments(path->trajectory, k, 0.0);
    if (max_slope) *max_slope = r.max_slope;
    if (argmax_j) *argmax_j = r.argmax_j;
  });
}

sw_status sw_run(const char* command, const char* config_json, sw_result** out) {
  if (command == nullptr) return null_argument("command");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto run = stretchwalk::app::run_command(command, parse_config(config_json));
    std::string summary = run.summary.dump(2);
    *out = new sw_result{std::move(run), std::move(summary)};
  });
}

sw_status sw_verify(const char* config_json, sw_criterion_fn on_done, void* user,
                    sw_result** out) {
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    stretchwalk::app::CriterionCallback cb;
    if (on_done) {
      cb = [&](const stretchwalk::app::CriterionResult& r) {
        const sw_criterion c{r.id, r.title.c_str(), r.passed ? 1 : 0, r.detail.c_str(),
                             r.seconds};
        on_done(&c, user);
      };
    }
    auto run = stretchwalk::app::run_verify(parse_config(config_json), cb);
    std::string summary = run.summary.dump(2);
    *out = new sw_result{std::move(run), std::move(summary)};
  });
}

void sw_result_free(sw_result* result) { delete result; }

size_t sw_result_file_count(const sw_result* result) {
  return result ? result->run.files.size() : 0;
}

const char* sw_result_file_name(const sw_result* result, size_t index) {
  if (result == nullptr || index >= result->run.files.size()) return nullptr;
  return result->run.files[index].name.c_str();
}

const char* sw_result_file_data(const sw_result* result, size_t index, size_t* length) {
  if (result == nullptr || index >= result->run.files.size()) {
    if (length) *length = 0;
    return nullptr;
  }
  const auto& content = result->run.files[index].content;
  if (length) *length = content.size();
  return content.data();
}

const char* sw_result_summary(const sw_result* result) {
  return result ? result->summary.c_str() : "";
}

int sw_result_passed(const sw_result* result) { return result && result->run.passed ? 1 : 0; }

size_t sw_command_count(void) { return stretchwalk::app::command_names().size(); }

const char* sw_command_name(size_t index) {
  const auto& names = stretchwalk::app::command_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

}  // extern "C"
