// Copyright 2026 The akrel Authors.
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

/* C interface to the akrel reliability toolkit.
 *
 * Every function returns an akrel_status. On failure a message is available
 * from akrel_last_error() on the same thread until the next call. Objects
 * are opaque; release them with the matching *_free function. Strings
 * returned through char** are owned by the caller and released with
 * akrel_string_free().
 */
#ifndef AKREL_H
#define AKREL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(AKREL_BUILDING_LIBRARY)
#    define AKREL_API __declspec(dllexport)
#  else
#    define AKREL_API __declspec(dllimport)
#  endif
#else
#  define AKREL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum akrel_status {
  AKREL_OK = 0,
  AKREL_ERR_INTERNAL = 1,
  AKREL_ERR_CONFIG = 2,
  AKREL_ERR_NOT_CONVERGED = 3,
  AKREL_ERR_EVALUATOR = 4,
  AKREL_ERR_INVALID_ARGUMENT = 5,
  AKREL_ERR_DOMAIN = 6,
  AKREL_ERR_ILL_CONDITIONED = 7,
  AKREL_ERR_DEGENERATE_ESR = 8,
  AKREL_ERR_IO = 9
} akrel_status;

typedef struct akrel_config akrel_config;
typedef struct akrel_result akrel_result;

/* Summary of a single run (akrel_run / akrel_run_callback). */
typedef struct akrel_summary {
  double pf_hat;
  double cov_pf;
  uint64_t n_calls;
  uint64_t n_initial;
  uint64_t n_adaptive;
  int has_eps_max;
  double eps_max_hat;
  int has_true_eps;
  double true_eps;
  uint64_t pool_size;
  int converged;
} akrel_summary;

/* Limit state callback: g(x) with x of length n. Set *ok to 0 to signal an
 * evaluation failure. */
typedef double (*akrel_limit_state_fn)(const double* x, size_t n, void* user, int* ok);

AKREL_API const char* akrel_version(void);
AKREL_API const char* akrel_last_error(void);
AKREL_API const char* akrel_status_string(akrel_status status);
AKREL_API void akrel_string_free(char* s);

AKREL_API akrel_status akrel_config_from_file(const char* path, akrel_config** out);
AKREL_API akrel_status akrel_config_from_string(const char* json, akrel_config** out);
AKREL_API akrel_status akrel_config_set_output_dir(akrel_config* cfg, const char* dir);
AKREL_API akrel_status akrel_config_set_repetitions(akrel_config* cfg, size_t repetitions);
AKREL_API akrel_status akrel_config_set_jobs(akrel_config* cfg, size_t jobs);
AKREL_API akrel_status akrel_config_has_output_dir(const akrel_config* cfg, int* out);
/* Effective configuration (defaults filled in) as JSON. */
AKREL_API akrel_status akrel_config_to_json(const akrel_config* cfg, char** out);
AKREL_API void akrel_config_free(akrel_config* cfg);

/* Single run. A run that stops without meeting its criteria returns
 * AKREL_ERR_NOT_CONVERGED and still produces a (flagged) result. */
AKREL_API akrel_status akrel_run(const akrel_config* cfg, akrel_result** out);
/* Single run against a caller-supplied limit state; the random model comes
 * from the config's benchmark or variables. */
AKREL_API akrel_status akrel_run_callback(const akrel_config* cfg, akrel_limit_state_fn g,
                                          void* user, akrel_result** out);
/* Multi-seed sweep. Failed seeds are recorded in the result. */
AKREL_API akrel_status akrel_sweep(const akrel_config* cfg, akrel_result** out);
/* Methods compared on one shared candidate pool. */
AKREL_API akrel_status akrel_compare(const akrel_config* cfg, akrel_result** out);

AKREL_API akrel_status akrel_result_summary(const akrel_result* result, akrel_summary* out);
AKREL_API akrel_status akrel_result_json(const akrel_result* result, char** out);
AKREL_API void akrel_result_free(akrel_result* result);

/* JSON array of {name, description, dim, reference_pf, preset}. */
AKREL_API akrel_status akrel_list_benchmarks(char** out);

#ifdef __cplusplus
}
#endif

#endif /* AKREL_H */
