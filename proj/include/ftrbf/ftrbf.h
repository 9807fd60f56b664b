/*
 * Copyright 2026 The ftrbf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the ftrbf library.
 *
 * Every function returns an ftrbf_status. On failure, ftrbf_last_error()
 * returns a message for the calling thread, valid until the next call into
 * the library from that thread. Objects are opaque handles owned by the
 * caller and released with the matching *_destroy function.
 *
 * Matrices are passed row-major: element (i, j) of an r x c matrix lives at
 * data[i * c + j].
 */

#ifndef FTRBF_FTRBF_H
#define FTRBF_FTRBF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FTRBF_BUILDING_LIBRARY)
#    define FTRBF_API __declspec(dllexport)
#  else
#    define FTRBF_API __declspec(dllimport)
#  endif
#else
#  define FTRBF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ftrbf_status {
  FTRBF_OK = 0,
  FTRBF_ERR_INVALID_ARGUMENT = 1,
  FTRBF_ERR_DIMENSION_MISMATCH = 2,
  FTRBF_ERR_NOT_POSITIVE_DEFINITE = 3,
  FTRBF_ERR_NON_FINITE = 4,
  FTRBF_ERR_SINGULAR = 5,
  FTRBF_ERR_IO = 6,
  FTRBF_ERR_PARSE = 7,
  FTRBF_ERR_NULL_POINTER = 8,
  FTRBF_ERR_INTERNAL = 99
} ftrbf_status;

typedef struct ftrbf_design ftrbf_design;
typedef struct ftrbf_fit_report ftrbf_fit_report;
typedef struct ftrbf_dataset ftrbf_dataset;

FTRBF_API const char* ftrbf_version(void);
FTRBF_API const char* ftrbf_last_error(void);
FTRBF_API const char* ftrbf_status_string(ftrbf_status status);

/* ---- design matrix ---------------------------------------------------- */

FTRBF_API ftrbf_status ftrbf_design_create(const double* inputs, size_t n_samples,
                                           const double* centers, size_t n_centers,
                                           size_t n_features, double width,
                                           ftrbf_design** out);
FTRBF_API void ftrbf_design_destroy(ftrbf_design* design);
FTRBF_API ftrbf_status ftrbf_design_shape(const ftrbf_design* design,
                                          size_t* n_samples, size_t* n_centers);
/* out holds n_samples * n_centers values. */
FTRBF_API ftrbf_status ftrbf_design_entries(const ftrbf_design* design, double* out);
/* Same centers and width, new inputs. */
FTRBF_API ftrbf_status ftrbf_design_evaluate(const ftrbf_design* design,
                                             const double* inputs, size_t n_samples,
                                             ftrbf_design** out);

/* ---- fault model ------------------------------------------------------ */

typedef struct ftrbf_fault {
  double open_prob; /* P_beta */
  double mult_var;  /* sigma_b^2 */
} ftrbf_fault;

FTRBF_API ftrbf_status ftrbf_average_error(const ftrbf_design* design,
                                           const double* targets,
                                           const double* weights, ftrbf_fault fault,
                                           double* out);
FTRBF_API ftrbf_status ftrbf_simulate_error(const ftrbf_design* design,
                                            const double* targets,
                                            const double* weights, ftrbf_fault fault,
                                            int64_t n_samples, uint64_t seed,
                                            double* mean, double* std_err);
/* Fault-aware training objective and its gradient (grad may be NULL). */
FTRBF_API ftrbf_status ftrbf_objective(const ftrbf_design* design, const double* targets,
                                       ftrbf_fault fault, const double* weights,
                                       double* value, double* grad);

/* ---- proximal operators ----------------------------------------------- */

FTRBF_API ftrbf_status ftrbf_soft_threshold(double z, double eta, double* out);
/* unified != 0 selects the rho-independent variant. */
FTRBF_API ftrbf_status ftrbf_mcp_prox(double z, double lambda, double gamma, double rho,
                                      int unified, double* out);
FTRBF_API ftrbf_status ftrbf_hard_threshold(const double* z, size_t n, size_t k,
                                            double* out);

/* ---- solvers ---------------------------------------------------------- */

typedef enum ftrbf_method { FTRBF_MCP = 0, FTRBF_HT = 1, FTRBF_L1 = 2 } ftrbf_method;
typedef enum ftrbf_rho_mode {
  FTRBF_RHO_AUTO = 0,
  FTRBF_RHO_FIXED = 1,
  FTRBF_RHO_LIPSCHITZ = 2
} ftrbf_rho_mode;

typedef struct ftrbf_solver_config {
  ftrbf_method method;
  double lambda;
  double gamma;
  size_t k_max;
  ftrbf_rho_mode rho_mode;
  double rho_value;  /* FTRBF_RHO_FIXED */
  double rho_safety; /* FTRBF_RHO_AUTO and FTRBF_RHO_LIPSCHITZ */
  double tol;
  int max_iter;
  int unified_prox;
  int refit;
} ftrbf_solver_config;

/* Fills library defaults for the given method. */
FTRBF_API void ftrbf_solver_config_init(ftrbf_solver_config* config, ftrbf_method method);

/* test_design and test_targets may both be NULL. */
FTRBF_API ftrbf_status ftrbf_fit(const ftrbf_design* design, const double* targets,
                                 ftrbf_fault fault, const ftrbf_solver_config* config,
                                 const ftrbf_design* test_design,
                                 const double* test_targets, ftrbf_fit_report** out);
FTRBF_API void ftrbf_fit_report_destroy(ftrbf_fit_report* report);
FTRBF_API size_t ftrbf_fit_report_n_weights(const ftrbf_fit_report* report);
FTRBF_API ftrbf_status ftrbf_fit_report_weights(const ftrbf_fit_report* report,
                                                double* out);
FTRBF_API size_t ftrbf_fit_report_n_centers_used(const ftrbf_fit_report* report);
FTRBF_API int ftrbf_fit_report_converged(const ftrbf_fit_report* report);
FTRBF_API int ftrbf_fit_report_iterations(const ftrbf_fit_report* report);
FTRBF_API double ftrbf_fit_report_rho(const ftrbf_fit_report* report);
FTRBF_API double ftrbf_fit_report_train_error(const ftrbf_fit_report* report);
/* NaN when the fit had no test set. */
FTRBF_API double ftrbf_fit_report_test_error(const ftrbf_fit_report* report);
FTRBF_API ftrbf_status ftrbf_fit_report_write_trace(const ftrbf_fit_report* report,
                                                    const char* path);
/* JSON text owned by the report, valid until it is destroyed. */
FTRBF_API const char* ftrbf_fit_report_json(const ftrbf_fit_report* report);

/* ---- data ------------------------------------------------------------- */

/* delimiter: "auto", "comma" or "whitespace". target_column < 0 means last. */
FTRBF_API ftrbf_status ftrbf_dataset_load(const char* path, const char* delimiter,
                                          int target_column, int header,
                                          ftrbf_dataset** out);
FTRBF_API ftrbf_status ftrbf_dataset_sinc(size_t n, double noise_std, uint64_t seed,
                                          ftrbf_dataset** out);
FTRBF_API void ftrbf_dataset_destroy(ftrbf_dataset* dataset);
FTRBF_API ftrbf_status ftrbf_dataset_shape(const ftrbf_dataset* dataset, size_t* rows,
                                           size_t* features);
FTRBF_API ftrbf_status ftrbf_dataset_inputs(const ftrbf_dataset* dataset, double* out);
FTRBF_API ftrbf_status ftrbf_dataset_targets(const ftrbf_dataset* dataset, double* out);
/* scheme: "none", "minmax01" or "zscore". Normalizes in place. */
FTRBF_API ftrbf_status ftrbf_dataset_normalize(ftrbf_dataset* dataset, const char* scheme);
FTRBF_API ftrbf_status ftrbf_dataset_write(const ftrbf_dataset* dataset, const char* path);
/* Normalization record as JSON, valid until the dataset changes or dies. */
FTRBF_API const char* ftrbf_dataset_normalization_json(const ftrbf_dataset* dataset);

FTRBF_API ftrbf_status ftrbf_preset(const char* name, double* width, size_t* train_size,
                                    size_t* test_size, size_t* n_features);

/* ---- statistics and experiments -------------------------------------- */

typedef struct ftrbf_ttest {
  double mean_diff;
  double std_dev;
  double t_value;
  double p_two_sided;
  double p_one_sided;
  double ci_low;
  double ci_high;
  double critical_one_tailed;
} ftrbf_ttest;

FTRBF_API ftrbf_status ftrbf_paired_t_test(const double* a, const double* b, size_t n,
                                           ftrbf_ttest* out);

FTRBF_API ftrbf_status ftrbf_experiment_validate(const char* config_path);
FTRBF_API ftrbf_status ftrbf_experiment_run(const char* config_path, const char* out_dir,
                                            unsigned jobs, int verbose);

#ifdef __cplusplus
}
#endif

#endif /* FTRBF_FTRBF_H */
