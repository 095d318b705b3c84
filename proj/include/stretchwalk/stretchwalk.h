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

#ifndef STRETCHWALK_STRETCHWALK_H
#define STRETCHWALK_STRETCHWALK_H

/*
 * C interface to the stretchwalk library.
 *
 * Every fallible call returns an sw_status. On failure the message of the
 * most recent error on the calling thread is available from sw_last_error()
 * until the next failing call. Handles are opaque; each *_create / *_simulate
 * / sw_run output must be released with its matching *_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SW_API __declspec(dllexport)
#else
#define SW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sw_status {
  SW_OK = 0,
  SW_INVALID_ARGUMENT = 1,
  SW_INVALID_MODEL = 2,
  SW_NON_INTEGRABLE = 3,
  SW_OUT_OF_SUPPORT = 4,
  SW_DOMAIN_ERROR = 5,
  SW_NO_CONVERGENCE = 6,
  SW_ENVELOPE_VIOLATED = 7,
  SW_THRESHOLD_NOT_FOUND = 8,
  SW_DEGENERATE_PLAN = 9,
  SW_NOT_ACHIEVABLE = 10,
  SW_DIVERGENT = 11,
  SW_NO_ROOT = 12,
  SW_DEGENERATE_WEIGHTS = 13,
  SW_BUDGET_EXCEEDED = 14,
  SW_BAD_WINDOW = 15,
  SW_IO_ERROR = 16,
  SW_USAGE = 17,
  SW_INTERNAL = 99
} sw_status;

typedef enum sw_method { SW_METHOD_TILTED_IS = 0, SW_METHOD_FIXED_SUM_GIBBS = 1 } sw_method;

typedef enum sw_conditioning {
  SW_END_AT_LEAST = 0, /* S_n >= n a */
  SW_END_EQUALS = 1,   /* S_n = n a */
  SW_UNCONDITIONED = 2
} sw_conditioning;

typedef struct sw_model sw_model;
typedef struct sw_path sw_path;
typedef struct sw_result sw_result;

typedef struct sw_bounds {
  double f_g1;
  double f_g2;
  double i_icc;
  double i_c;
  double H;
  double G;
  double tau;
} sw_bounds;

typedef struct sw_estimate {
  double p_hat;
  double std_err;
  double n_eff;
  size_t replications;
} sw_estimate;

typedef struct sw_criterion {
  int id;
  const char* title;
  int passed;
  const char* detail;
  double seconds;
} sw_criterion;

typedef void (*sw_criterion_fn)(const sw_criterion* criterion, void* user);

SW_API const char* sw_version(void);
/* "NoRoot", "UsageError", ... */
SW_API const char* sw_status_name(sw_status status);
SW_API const char* sw_last_error(void);

/* Models: spec is a shorthand ("weibull:k=3", "power:beta=2,sin=1") or a
 * JSON object ({"kind": "exp", "perturbation": "almost-log-concave"}). */
SW_API sw_status sw_model_create(const char* spec, sw_model** out);
SW_API void sw_model_free(sw_model* model);
SW_API const char* sw_model_describe(const sw_model* model);
SW_API sw_status sw_model_mean(const sw_model* model, double* out);
SW_API sw_status sw_model_log_density(const sw_model* model, double x, double* out);

SW_API sw_status sw_bounds_compute(const sw_model* model, size_t n, double a, double eps,
                                   sw_bounds* out);
SW_API sw_status sw_rate(const sw_model* model, double x, double* rate, double* t_star);
SW_API sw_status sw_localize(const sw_model* model, size_t n, double a, double eps,
                             sw_method method, size_t budget, uint64_t seed, sw_estimate* out);

SW_API sw_status sw_path_simulate(const sw_model* model, size_t n, double a,
                                  sw_conditioning conditioning, uint64_t seed, sw_path** out);
SW_API void sw_path_free(sw_path* path);
SW_API size_t sw_path_length(const sw_path* path);
SW_API const double* sw_path_increments(const sw_path* path);
SW_API const double* sw_path_partial_sums(const sw_path* path);
/* Largest window mean over windows of length k (first index on ties). */
SW_API sw_status sw_path_max_slope(const sw_path* path, size_t k, double* max_slope,
                                   size_t* argmax_j);

/* Runs a subcommand (bounds, conditions, rate, localize, paths, verify) on a
 * JSON config object; config_json may be NULL for the defaults. */
SW_API sw_status sw_run(const char* command, const char* config_json, sw_result** out);
/* As sw_run("verify", ...), calling on_done after each criterion. */
SW_API sw_status sw_verify(const char* config_json, sw_criterion_fn on_done, void* user,
                           sw_result** out);
SW_API void sw_result_free(sw_result* result);
SW_API size_t sw_result_file_count(const sw_result* result);
SW_API const char* sw_result_file_name(const sw_result* result, size_t index);
SW_API const char* sw_result_file_data(const sw_result* result, size_t index, size_t* length);
/* JSON text; may include runtimes, unlike the files. */
SW_API const char* sw_result_summary(const sw_result* result);
/* 0 when verify found a failing criterion, 1 otherwise. */
SW_API int sw_result_passed(const sw_result* result);

SW_API size_t sw_command_count(void);
SW_API const char* sw_command_name(size_t index);

#ifdef __cplusplus
}
#endif

#endif /* STRETCHWALK_STRETCHWALK_H */
