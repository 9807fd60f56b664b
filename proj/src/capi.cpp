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

#include "ftrbf/ftrbf.h"

#include <cmath>
#include <fstream>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>

#include "ftrbf/design.hpp"
#include "ftrbf/error.hpp"
#include "ftrbf/experiment.hpp"
#include "ftrbf/fault_model.hpp"
#include "ftrbf/prox.hpp"
#include "ftrbf/solvers.hpp"
#include "ftrbf/stats.hpp"

struct ftrbf_design {
  std::shared_ptr<const ftrbf::DesignMatrix> impl;
};

struct ftrbf_fit_report {
  ftrbf::FitReport impl;
  std::string json;
};

struct ftrbf_dataset {
  ftrbf::Dataset impl;
  std::string norm_json;
};

namespace {

using ftrbf::ErrorCode;
using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

thread_local std::string g_last_error;

ftrbf_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return FTRBF_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return FTRBF_ERR_DIMENSION_MISMATCH;
    case ErrorCode::NotPositiveDefinite: return FTRBF_ERR_NOT_POSITIVE_DEFINITE;
    case ErrorCode::NonFinite: return FTRBF_ERR_NON_FINITE;
    case ErrorCode::Singular: return FTRBF_ERR_SINGULAR;
    case ErrorCode::Io: return FTRBF_ERR_IO;
    case ErrorCode::Parse: return FTRBF_ERR_PARSE;
  }
  return FTRBF_ERR_INTERNAL;
}

struct NullArgument : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
ftrbf_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return FTRBF_OK;
  } catch (const ftrbf::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const NullArgument& e) {
    g_last_error = e.what();
    return FTRBF_ERR_NULL_POINTER;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FTRBF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FTRBF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FTRBF_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw NullArgument(std::string(what) + " is NULL");
}

ftrbf::Matrix read_matrix(const double* data, size_t rows, size_t cols) {
  const auto r = static_cast<Eigen::Index>(rows);
  const auto c = static_cast<Eigen::Index>(cols);
  return Eigen::Map<const RowMajor>(data, r, c);
}

ftrbf::Vector read_vector(const double* data, Eigen::Index n) {
  return Eigen::Map<const ftrbf::Vector>(data, n);
}

void write_matrix(const ftrbf::Matrix& m, double* out) {
  Eigen::Map<RowMajor>(out, m.rows(), m.cols()) = m;
}

ftrbf::FaultSpec to_fault(ftrbf_fault f) {
  ftrbf::FaultSpec s;
  s.open_prob = f.open_prob;
  s.mult_var = f.mult_var;
  s.validate();
  return s;
}

ftrbf::SolverConfig to_config(const ftrbf_solver_config& c) {
  ftrbf::SolverConfig s;
  switch (c.method) {
    case FTRBF_MCP: s.method = ftrbf::Method::Mcp; break;
    case FTRBF_HT: s.method = ftrbf::Method::Ht; break;
    case FTRBF_L1: s.method = ftrbf::Method::L1; break;
    default: ftrbf::fail(ErrorCode::InvalidArgument, "unknown method");
  }
  s.lambda = c.lambda;
  s.gamma = c.gamma;
  s.k_max = static_cast<Eigen::Index>(c.k_max);
  switch (c.rho_mode) {
    case FTRBF_RHO_AUTO: s.rho = ftrbf::RhoPolicy::automatic(c.rho_safety); break;
    case FTRBF_RHO_FIXED: s.rho = ftrbf::RhoPolicy::fixed(c.rho_value); break;
    case FTRBF_RHO_LIPSCHITZ: s.rho = ftrbf::RhoPolicy::lipschitz(c.rho_safety); break;
    default: ftrbf::fail(ErrorCode::InvalidArgument, "unknown rho mode");
  }
  s.tol = c.tol;
  s.max_iter = c.max_iter;
  s.prox_variant = c.unified_prox ? ftrbf::McpVariant::Unified : ftrbf::McpVariant::Exact;
  s.refit = c.refit != 0;
  return s;
}

}  // namespace

extern "C" {

const char* ftrbf_version(void) { return FTRBF_VERSION_STRING; }

const char* ftrbf_last_error(void) { return g_last_error.c_str(); }

const char* ftrbf_status_string(ftrbf_status status) {
  switch (status) {
    case FTRBF_OK: return "ok";
    case FTRBF_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FTRBF_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case FTRBF_ERR_NOT_POSITIVE_DEFINITE: return "not positive definite";
    case FTRBF_ERR_NON_FINITE: return "non-finite value";
    case FTRBF_ERR_SINGULAR: return "singular system";
    case FTRBF_ERR_IO: return "i/o error";
    case FTRBF_ERR_PARSE: return "parse error";
    case FTRBF_ERR_NULL_POINTER: return "null pointer";
    case FTRBF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

// ---- design -------------------------------------------------------------

ftrbf_status ftrbf_design_create(const double* inputs, size_t n_samples,
                                 const double* centers, size_t n_centers,
                                 size_t n_features, double width, ftrbf_design** out) {
  if (out == nullptr) return FTRBF_ERR_NULL_POINTER;
  *out = nullptr;
  return guarded([&] {
    need(inputs, "inputs");
    need(centers, "centers");
    auto d = std::make_shared<const ftrbf::DesignMatrix>(ftrbf::DesignMatrix::build(
        read_matrix(inputs, n_samples, n_features),
        read_matrix(centers, n_centers, n_features), width));
    *out = new ftrbf_design{std::move(d)};
  });
}

void ftrbf_design_destroy(ftrbf_design* design) { delete design; }

ftrbf_status ftrbf_design_shape(const ftrbf_design* design, size_t* n_samples,
                                size_t* n_centers) {
  if (design == nullptr) return FTRBF_ERR_NULL_POINTER;
  if (n_samples) *n_samples = static_cast<size_t>(design->impl->n_samples());
  if (n_centers) *n_centers = static_cast<size_t>(design->impl->n_centers());
  return FTRBF_OK;
}

ftrbf_status ftrbf_design_entries(const ftrbf_design* design, double* out) {
  if (design == nullptr || out == nullptr) return FTRBF_ERR_NULL_POINTER;
  return guarded([&] { write_matrix(design->impl->entries(), out); });
}

ftrbf_status ftrbf_design_evaluate(const ftrbf_design* design, const double* inputs,
                                   size_t n_samples, ftrbf_design** out) {
  if (design == nullptr || out == nullptr) return FTRBF_ERR_NULL_POINTER;
  *out = nullptr;
  return guarded([&] {
    need(inputs, "inputs");
    const auto k = static_cast<size_t>(design->impl->centers().cols());
    auto d = std::make_shared<const ftrbf::DesignMatrix>(
        design->impl->evaluate(read_matrix(inputs, n_samples, k)));
    *out = new ftrbf_design{std::move(d)};
  });
}

// ---- fault model --------------------------------------------------------

ftrbf_status ftrbf_average_error(const ftrbf_design* design, const double* targets,
                                 const double* weights, ftrbf_fault fault, double* out) {
  if (design == nullptr || out == nullptr) return FTRBF_ERR_NULL_POINTER;
  return guarded([&] {
    need(targets, "targets");
    need(weights, "weights");
    const auto& d = *design->impl;
    *out = ftrbf::average_train_error(d, read_vector(targets, d.n_samples()),
                                      read_vector(weights, d.n_centers()), to_fault(fault));
  });
}

ftrbf_status ftrbf_simulate_error(const ftrbf_design* design, const double* targets,
                                  const double* weights, ftrbf_fault fault,
                                  int64_t n_samples, uint64_t seed, double* mean,
                                  double* std_err) {
  if (design == nullptr || mean == nullptr) return FTRBF_ERR_NULL_POINTER;
  return guarded([&] {
    need(targets, "targets");
    need(weights, "weights");
    const auto& d = *design->impl;
    const auto est = ftrbf::simulate_faulty_error(
        d, read_vector(targets, d.n_samples()), read_vector(weights, d.n_centers()),
        to_fault(fault), n_samples, seed);
    *mean = est.mean;
    if (std_err) *std_err = est.std_err;
  });
}

ftrbf_status ftrbf_objective(const ftrbf_design* design, const double* targets,
                             ftrbf_fault fault, const double* weights, double* value,
                             double* grad) {
  if (design == nullptr || value == nullptr) return FTRBF_ERR_NULL_POINTER;
  return guarded([&] {
    need(targets, "targets");
    need(weights, "weights");
    const auto& d = *design->impl;
    const ftrbf::SmoothObjective obj(design->impl, read_vector(targets, d.n_samples()),
                                     to_fault(fault));
    const ftrbf::Vector w = read_vector(weights, d.n_centers());
    *value = obj.value(w);
    if (grad) Eigen::Map<ftrbf::Vector>(grad, w.size()) = obj.gradient(w);
  });
}

// ---- prox ---------------------------------------------------------------

ftrbf_status ftrbf_soft_threshold(double z, double eta, double* out) {
  if (out == nullptr) return FTRBF_ERR_NULL_POINTER;
  return guarded([&] { *out = ftrbf::soft_threshold(z, eta); });
}

ftrbf_status ftrbf_mcp_prox(double z, double lambda, double gamma, double rho, int unified,
                            double* out) {
  if (out == nullptr) return FTRBF_ERR_NULL_POINTER;
  return guarded([&] {
    const ftrbf::McpParams p{lambda, gamma};
    p.validate();
    ftrbf::require(rho > 0.0 && std::isfinite(rho), ErrorCode::InvalidArgument,
                   "rho must be positive");
    *out = unified ? ftrbf::mcp_prox_unified(z, p, rho) : ftrbf::mcp_prox_exact(z, p, rho);
  });
}

ftrbf_status ftrbf_hard_threshold(const double* z, size_t n, size_t k, double* out) {
  if (z == nullptr || out == nullptr) return FTRBF_ERR_NULL_POINTER;
  return guarded([&] {
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::Map<ftrbf::Vector>(out, m) =
        ftrbf::hard_threshold(read_vector(z, m), static_cast<Eigen::Index>(k));
  });
}

// ---- solvers ------------------------------------------------------------

void ftrbf_solver_config_init(ftrbf_solver_config* config, ftrbf_method method) {
  if (config == nullptr) return;
  const ftrbf::SolverConfig d;
  config->method = method;
  config->lambda = d.lambda;
  config->gamma = d.gamma;
  config->k_max = 0;
  config->rho_mode = FTRBF_RHO_AUTO;
  config->rho_value = 1.0;
  config->rho_safety = d.rho.safety;
  config->tol = d.tol;
  config->max_iter = d.max_iter;
  config->unified_prox = 0;
  config->refit = 0;
}

ftrbf_status ftrbf_fit(const ftrbf_design* design, const double* targets, ftrbf_fault fault,
                       const ftrbf_solver_config* config, const ftrbf_design* test_design,
                       const double* test_targets, ftrbf_fit_report** out) {
  if (design == nullptr || config == nullptr || out == nullptr) return FTRBF_ERR_NULL_POINTER;
  *out = nullptr;
  return guarded([&] {
    need(targets, "targets");
    if ((test_design == nullptr) != (test_targets == nullptr)) {
      ftrbf::fail(ErrorCode::InvalidArgument,
                  "test_design and test_targets must both be set or both be NULL");
    }
    const auto& d = *design->impl;
    ftrbf::Vector y_test;
    ftrbf::EvalSet test;
    if (test_design) {
      y_test = read_vector(test_targets, test_design->impl->n_samples());
      test = {test_design->impl.get(), &y_test};
    }
    const ftrbf::SmoothObjective obj(design->impl, read_vector(targets, d.n_samples()),
                                     to_fault(fault));
    auto report = std::make_unique<ftrbf_fit_report>();
    report->impl = ftrbf::fit(obj, to_config(*config), test);
    report->json = report->impl.to_json();
    *out = report.release();
  });
}

void ftrbf_fit_report_destroy(ftrbf_fit_report* report) { delete report; }

size_t ftrbf_fit_report_n_weights(const ftrbf_fit_report* report) {
  return report ? static_cast<size_t>(report->impl.weights.size()) : 0;
}

ftrbf_status ftrbf_fit_report_weights(const ftrbf_fit_report* report, double* out) {
  if (report == nullptr || out == nullptr) return FTRBF_ERR_NULL_POINTER;
  const auto& w = report->impl.weights;
  Eigen::Map<ftrbf::Vector>(out, w.size()) = w;
  return FTRBF_OK;
}

size_t ftrbf_fit_report_n_centers_used(const ftrbf_fit_report* report) {
  return report ? static_cast<size_t>(report->impl.n_centers_used) : 0;
}

int ftrbf_fit_report_converged(const ftrbf_fit_report* report) {
  return report && report->impl.converged ? 1 : 0;
}

int ftrbf_fit_report_iterations(const ftrbf_fit_report* report) {
  return report ? report->impl.iterations : 0;
}

double ftrbf_fit_report_rho(const ftrbf_fit_report* report) {
  return report ? report->impl.rho : std::nan("");
}

double ftrbf_fit_report_train_error(const ftrbf_fit_report* report) {
  return report ? report->impl.train_error_faulty : std::nan("");
}

double ftrbf_fit_report_test_error(const ftrbf_fit_report* report) {
  if (report == nullptr || !report->impl.test_error_faulty) return std::nan("");
  return *report->impl.test_error_faulty;
}

ftrbf_status ftrbf_fit_report_write_trace(const ftrbf_fit_report* report, const char* path) {
  if (report == nullptr || path == nullptr) return FTRBF_ERR_NULL_POINTER;
  return guarded([&] {
    std::ofstream out(path);
    if (!out) ftrbf::fail(ErrorCode::Io, std::string("cannot write '") + path + "'");
    report->impl.trace.write_csv(out);
    if (!out) ftrbf::fail(ErrorCode::Io, std::string("write failed for '") + path + "'");
  });
}

const char* ftrbf_fit_report_json(const ftrbf_fit_report* report) {
  return report ? report->json.c_str() : nullptr;
}

// ---- data ---------------------------------------------------------------

ftrbf_status ftrbf_dataset_load(const char* path, const char* delimiter, int target_column,
                                int header, ftrbf_dataset** out) {
  if (path == nullptr || out == nullptr) return FTRBF_ERR_NULL_POINTER;
  *out = nullptr;
  return guarded([&] {
    ftrbf::LoadOptions opts;
    opts.delimiter = ftrbf::parse_delimiter(delimiter ? delimiter : "auto");
    opts.target_column = target_column;
    opts.header = header != 0;
    *out = new ftrbf_dataset{ftrbf::load_delimited(path, opts), {}};
  });
}

ftrbf_status ftrbf_dataset_sinc(size_t n, double noise_std, uint64_t seed,
                                ftrbf_dataset** out) {
  if (out == nullptr) return FTRBF_ERR_NULL_POINTER;
  *out = nullptr;
  return guarded([&] {
    *out = new ftrbf_dataset{
        ftrbf::synthetic_sinc(static_cast<Eigen::Index>(n), noise_std, seed), {}};
  });
}

void ftrbf_dataset_destroy(ftrbf_dataset* dataset) { delete dataset; }

ftrbf_status ftrbf_dataset_shape(const ftrbf_dataset* dataset, size_t* rows,
                                 size_t* features) {
  if (dataset == nullptr) return FTRBF_ERR_NULL_POINTER;
  if (rows) *rows = static_cast<size_t>(dataset->impl.rows());
  if (features) *features = static_cast<size_t>(dataset->impl.features());
  return FTRBF_OK;
}

ftrbf_status ftrbf_dataset_inputs(const ftrbf_dataset* dataset, double* out) {
  if (dataset == nullptr || out == nullptr) return FTRBF_ERR_NULL_POINTER;
  write_matrix(dataset->impl.inputs, out);
  return FTRBF_OK;
}

ftrbf_status ftrbf_dataset_targets(const ftrbf_dataset* dataset, double* out) {
  if (dataset == nullptr || out == nullptr) return FTRBF_ERR_NULL_POINTER;
  const auto& y = dataset->impl.targets;
  Eigen::Map<ftrbf::Vector>(out, y.size()) = y;
  return FTRBF_OK;
}

ftrbf_status ftrbf_dataset_normalize(ftrbf_dataset* dataset, const char* scheme) {
  if (dataset == nullptr || scheme == nullptr) return FTRBF_ERR_NULL_POINTER;
  return guarded([&] {
    dataset->impl = ftrbf::normalize(dataset->impl, ftrbf::parse_norm_scheme(scheme));
    dataset->norm_json.clear();
  });
}

ftrbf_status ftrbf_dataset_write(const ftrbf_dataset* dataset, const char* path) {
  if (dataset == nullptr || path == nullptr) return FTRBF_ERR_NULL_POINTER;
  return guarded([&] { ftrbf::write_delimited(dataset->impl, path); });
}

const char* ftrbf_dataset_normalization_json(const ftrbf_dataset* dataset) {
  if (dataset == nullptr) return nullptr;
  auto* d = const_cast<ftrbf_dataset*>(dataset);
  if (d->norm_json.empty()) d->norm_json = d->impl.normalization.to_json();
  return d->norm_json.c_str();
}

ftrbf_status ftrbf_preset(const char* name, double* width, size_t* train_size,
                          size_t* test_size, size_t* n_features) {
  if (name == nullptr) return FTRBF_ERR_NULL_POINTER;
  return guarded([&] {
    const auto p = ftrbf::table1_preset(name);
    if (width) *width = p.width;
    if (train_size) *train_size = static_cast<size_t>(p.train_size);
    if (test_size) *test_size = static_cast<size_t>(p.test_size);
    if (n_features) *n_features = static_cast<size_t>(p.n_features);
  });
}

// ---- statistics and experiments ----------------------------------------

ftrbf_status ftrbf_paired_t_test(const double* a, const double* b, size_t n,
                                 ftrbf_ttest* out) {
  if (a == nullptr || b == nullptr || out == nullptr) return FTRBF_ERR_NULL_POINTER;
  return guarded([&] {
    const auto r = ftrbf::paired_t_test(std::vector<double>(a, a + n),
                                        std::vector<double>(b, b + n));
    *out = {r.mean_diff, r.std_dev, r.t_value,  r.p_two_sided,
            r.p_one_sided, r.ci_low, r.ci_high, r.critical_one_tailed};
  });
}

ftrbf_status ftrbf_experiment_validate(const char* config_path) {
  if (config_path == nullptr) return FTRBF_ERR_NULL_POINTER;
  return guarded([&] { ftrbf::load_experiment_config(config_path); });
}

ftrbf_status ftrbf_experiment_run(const char* config_path, const char* out_dir,
                                  unsigned jobs, int verbose) {
  if (config_path == nullptr || out_dir == nullptr) return FTRBF_ERR_NULL_POINTER;
  return guarded([&] {
    const auto cfg = ftrbf::load_experiment_config(config_path);
    ftrbf::RunOptions opts;
    opts.jobs = jobs == 0 ? 1 : jobs;
    opts.verbose = verbose != 0;
    ftrbf::run_experiment(cfg, out_dir, opts);
  });
}

}  // extern "C"
