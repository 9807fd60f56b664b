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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftrbf/admm.hpp"
#include "ftrbf/design.hpp"
#include "ftrbf/fault_spec.hpp"
#include "ftrbf/prox.hpp"

namespace ftrbf {

enum class Method { Mcp, Ht, L1 };

const char* method_name(Method m);
Method parse_method(const std::string& name);

struct SolverConfig {
  Method method = Method::Ht;
  double lambda = 0.0;       // mcp, l1
  double gamma = 1.001;      // mcp
  Eigen::Index k_max = 0;    // ht
  RhoPolicy rho;
  double tol = 1e-6;
  int max_iter = 1000;
  McpVariant prox_variant = McpVariant::Exact;
  bool refit = false;
  std::uint64_t seed = 0;
  double zero_tol = 1e-8;

  static SolverConfig mcp(double lambda, double gamma = 1.001);
  static SolverConfig ht(Eigen::Index k_max);
  static SolverConfig l1(double lambda);

  /// Throws InvalidArgument when method-specific parameters are missing.
  void validate(Eigen::Index n_centers) const;

  Penalty penalty() const;

  /// The parameter a sweep varies: lambda for mcp/l1, k_max for ht.
  double swept_value() const;
};

/// Held-out data for the test-error column of a report.
struct EvalSet {
  const DesignMatrix* design = nullptr;
  const Vector* targets = nullptr;
};

struct FitReport {
  Method method = Method::Ht;
  SolverConfig config;
  Vector weights;                     // final u (or its refit)
  std::vector<Eigen::Index> support;  // 0-based, ascending
  Eigen::Index n_centers_used = 0;
  double train_error_faulty = 0.0;
  std::optional<double> test_error_faulty;
  IterationTrace trace;
  bool converged = false;
  double consensus_gap = 0.0;  // |w - u| at exit
  int iterations = 0;
  double rho = 0.0;

  /// Single JSON object: method, params, metrics, support, trace_path.
  std::string to_json(const std::string& trace_path = "") const;
};

std::vector<Eigen::Index> extract_support(const Vector& u,
                                          double zero_tol = 1e-8);

/// Minimizer of psi restricted to the given columns; zero elsewhere.
/// Throws Singular when the restricted Hessian cannot be factorized.
Vector refit_on_support(const SmoothObjective& obj,
                        const std::vector<Eigen::Index>& support);
Vector refit_on_support(const DesignMatrix& design, const Vector& y,
                        const FaultSpec& fault,
                        const std::vector<Eigen::Index>& support);

FitReport fit(const SmoothObjective& obj, const SolverConfig& config,
              const EvalSet& test = {});
FitReport fit(const DesignMatrix& design, const Vector& y,
              const FaultSpec& fault, const SolverConfig& config,
              const EvalSet& test = {});

/// Per-point overrides applied on top of a base configuration.
struct ParamOverride {
  std::optional<double> lambda;
  std::optional<double> gamma;
  std::optional<Eigen::Index> k_max;
  std::optional<RhoPolicy> rho;

  SolverConfig apply(SolverConfig base) const;
};

/// One independent fit per grid point, reports in grid order. `jobs` > 1
/// runs points on worker threads; results are identical to jobs == 1.
std::vector<FitReport> sweep(const DesignMatrix& design, const Vector& y,
                             const FaultSpec& fault, const SolverConfig& base,
                             const std::vector<ParamOverride>& grid,
                             const EvalSet& test = {}, unsigned jobs = 1);

/// Index of the report whose node count is closest to `target`; ties go to
/// the earlier report.
std::size_t nearest_node_count(const std::vector<FitReport>& reports,
                               double target);

}  // namespace ftrbf
