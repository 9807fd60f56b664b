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

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "ftrbf/design.hpp"
#include "ftrbf/error.hpp"
#include "ftrbf/prox.hpp"

namespace ftrbf {

enum class RhoMode {
  Auto,       // safety * max(2 l^2 / a, l)
  Fixed,      // value as configured
  Lipschitz,  // safety * l
};

struct RhoPolicy {
  RhoMode mode = RhoMode::Auto;
  double value = 1.0;
  double safety = 1.1;

  static RhoPolicy automatic(double safety = 1.1) {
    return {RhoMode::Auto, 1.0, safety};
  }
  static RhoPolicy fixed(double value) { return {RhoMode::Fixed, value, 1.0}; }
  static RhoPolicy lipschitz(double safety = 1.0) {
    return {RhoMode::Lipschitz, 1.0, safety};
  }
};

double compute_rho(const SmoothObjective& obj, const RhoPolicy& policy);

/// Bound-based rho from precomputed curvature.
double rho_from_bounds(const CurvatureBounds& bounds, const RhoPolicy& policy);

/// tau_1 = a/2 - l^2/rho. Positive iff rho > 2 l^2 / a.
double sufficient_decrease_rate(const CurvatureBounds& bounds, double rho);

struct AdmmState {
  Vector w;
  Vector u;
  Vector upsilon;
  int iter = 0;
  double lagrangian = 0.0;

  static AdmmState zeros(Eigen::Index m);
};

struct IterationRecord {
  int iter = 0;               // 1-based count of completed iterations
  double lagrangian = 0.0;    // L(w^{k+1}, u^{k+1}, v^{k+1})
  double primal_residual = 0.0;  // |u - w|
  double dual_residual = 0.0;    // rho |u^{k+1} - u^k|
  double psi = 0.0;              // psi(w^{k+1})
  Eigen::Index support_size = 0;  // nonzeros of u^{k+1}
  double sd_slack = 0.0;          // (L^k - L^{k+1}) - tau_1 |w^{k+1} - w^k|^2
  double w_step_sq = 0.0;         // |w^{k+1} - w^k|^2
  double stationarity_gap = 0.0;  // |grad psi(w) - v| / max(1, |v|)
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  double initial_lagrangian = 0.0;
  double rho = 0.0;
  double tau1 = 0.0;
  CurvatureBounds bounds;
  std::vector<std::string> warnings;

  /// CSV with header iter,lagrangian,primal_res,dual_res,psi,support_size,sd_slack
  void write_csv(std::ostream& os) const;
};

/// Holds the Cholesky factor of (2/N) A^T A + 2R + rho I; reused by every
/// w-update of a run.
class WUpdater {
 public:
  WUpdater(const SmoothObjective& obj, double rho);

  /// argmin_w psi(w) + v^T(u - w) + (rho/2)|w - u|^2.
  Vector operator()(const Vector& u, const Vector& upsilon) const;

  double rho() const { return rho_; }

 private:
  const SmoothObjective* obj_;
  double rho_;
  Eigen::LLT<Matrix> factor_;
};

Vector w_update(const SmoothObjective& obj, const Vector& u,
                const Vector& upsilon, double rho);

/// v + rho (u_next - w_next)
Vector dual_update(const Vector& upsilon, const Vector& u_next,
                   const Vector& w_next, double rho);

/// psi(w) + g(u) + v^T(u - w) + (rho/2)|w - u|^2; +infinity when g(u) is.
double augmented_lagrangian(const SmoothObjective& obj, const Penalty& penalty,
                            const AdmmState& state, double rho);

struct EngineConfig {
  RhoPolicy rho;
  double tol = 1e-6;
  int max_iter = 1000;
  double zero_tol = 1e-8;
};

struct AdmmResult {
  AdmmState state;
  IterationTrace trace;
  bool converged = false;
};

/// Iterates u <- prox(w - v/rho), w <- WUpdater(u, v), v <- v + rho(u - w)
/// from the zero state until max(primal, dual residual) < tol or max_iter.
AdmmResult run_admm(const SmoothObjective& obj, const Penalty& penalty,
                    const EngineConfig& config);

/// Thrown when an iterate becomes non-finite; carries the partial trace.
class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& what, IterationTrace trace)
      : Error(ErrorCode::NonFinite, what), trace_(std::move(trace)) {}
  const IterationTrace& trace() const { return trace_; }

 private:
  IterationTrace trace_;
};

struct DecreaseCheck {
  bool holds = true;
  std::optional<std::size_t> first_violation;  // index into records
  double worst_slack = 0.0;
};

/// Verifies L^{k+1} - L^k <= -tau1 |w^{k+1} - w^k|^2 + 1e-10 for every pair
/// of consecutive records. Requires at least two records.
DecreaseCheck check_sufficient_decrease(const IterationTrace& trace,
                                        double tau1);

}  // namespace ftrbf
