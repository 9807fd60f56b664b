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

#include "ftrbf/admm.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <sstream>

#include "ftrbf/error.hpp"

namespace ftrbf {

double rho_from_bounds(const CurvatureBounds& bounds, const RhoPolicy& policy) {
  switch (policy.mode) {
    case RhoMode::Fixed:
      require(policy.value > 0.0 && std::isfinite(policy.value),
              ErrorCode::InvalidArgument, "fixed rho must be positive");
      return policy.value;
    case RhoMode::Auto: {
      require(policy.safety >= 1.0, ErrorCode::InvalidArgument,
              "rho safety factor must be >= 1 in auto mode");
      const double l = bounds.lipschitz;
      const double a = bounds.strong_convexity;
      return policy.safety * std::max(2.0 * l * l / a, l);
    }
    case RhoMode::Lipschitz:
      require(policy.safety > 0.0, ErrorCode::InvalidArgument,
              "rho safety factor must be positive");
      return policy.safety * bounds.lipschitz;
  }
  fail(ErrorCode::InvalidArgument, "unknown rho mode");
}

namespace {

// Lipschitz mode needs only the top of the spectrum, which exists even when
// the Hessian is singular (fault-free fits on redundant centers).
CurvatureBounds top_of_spectrum(const SmoothObjective& obj) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(obj.hessian(), Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success, ErrorCode::NotPositiveDefinite,
          "eigenvalue computation failed");
  const double l = es.eigenvalues().maxCoeff();
  require(l > 0.0, ErrorCode::NotPositiveDefinite, "Hessian has no positive eigenvalue");
  return {l, 0.0};
}

}  // namespace

double compute_rho(const SmoothObjective& obj, const RhoPolicy& policy) {
  switch (policy.mode) {
    case RhoMode::Fixed: return rho_from_bounds({}, policy);
    case RhoMode::Auto: return rho_from_bounds(obj.curvature_bounds(), policy);
    case RhoMode::Lipschitz:
      try {
        return rho_from_bounds(obj.curvature_bounds(), policy);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotPositiveDefinite) throw;
        return rho_from_bounds(top_of_spectrum(obj), policy);
      }
  }
  fail(ErrorCode::InvalidArgument, "unknown rho mode");
}

double sufficient_decrease_rate(const CurvatureBounds& bounds, double rho) {
  return bounds.strong_convexity / 2.0 -
         bounds.lipschitz * bounds.lipschitz / rho;
}

AdmmState AdmmState::zeros(Eigen::Index m) {
  AdmmState s;
  s.w = Vector::Zero(m);
  s.u = Vector::Zero(m);
  s.upsilon = Vector::Zero(m);
  return s;
}

void IterationTrace::write_csv(std::ostream& os) const {
  os << "iter,lagrangian,primal_res,dual_res,psi,support_size,sd_slack\n";
  char buf[512];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%lld,%.17g\n",
                  r.iter, r.lagrangian, r.primal_residual, r.dual_residual,
                  r.psi, static_cast<long long>(r.support_size), r.sd_slack);
    os << buf;
  }
}

WUpdater::WUpdater(const SmoothObjective& obj, double rho)
    : obj_(&obj), rho_(rho) {
  require(rho > 0.0 && std::isfinite(rho), ErrorCode::InvalidArgument,
          "rho must be positive");
  Matrix sys = obj.hessian();
  sys.diagonal().array() += rho;
  factor_.compute(sys);
  require(factor_.info() == Eigen::Success, ErrorCode::NotPositiveDefinite,
          "Cholesky factorization of the w-update system failed");
}

Vector WUpdater::operator()(const Vector& u, const Vector& upsilon) const {
  require(u.size() == obj_->dim() && upsilon.size() == obj_->dim(),
          ErrorCode::DimensionMismatch, "w-update operand length mismatch");
  const Vector rhs = obj_->linear_term() + rho_ * u + upsilon;
  return factor_.solve(rhs);
}

Vector w_update(const SmoothObjective& obj, const Vector& u,
                const Vector& upsilon, double rho) {
  return WUpdater(obj, rho)(u, upsilon);
}

Vector dual_update(const Vector& upsilon, const Vector& u_next,
                   const Vector& w_next, double rho) {
  require(upsilon.size() == u_next.size() && u_next.size() == w_next.size(),
          ErrorCode::DimensionMismatch, "dual update operand length mismatch");
  return upsilon + rho * (u_next - w_next);
}

namespace {

double lagrangian_from_psi(double psi, const Penalty& penalty,
                           const AdmmState& s, double rho) {
  const double g = penalty_value(s.u, penalty);
  if (std::isinf(g)) return g;
  const Vector gap = s.u - s.w;
  return psi + g + s.upsilon.dot(gap) + 0.5 * rho * gap.squaredNorm();
}

bool all_finite(const AdmmState& s) {
  return s.w.allFinite() && s.u.allFinite() && s.upsilon.allFinite();
}

}  // namespace

double augmented_lagrangian(const SmoothObjective& obj, const Penalty& penalty,
                            const AdmmState& state, double rho) {
  require(state.w.size() == state.u.size() &&
              state.u.size() == state.upsilon.size(),
          ErrorCode::DimensionMismatch, "ADMM state vectors differ in length");
  return lagrangian_from_psi(obj.value(state.w), penalty, state, rho);
}

AdmmResult run_admm(const SmoothObjective& obj, const Penalty& penalty,
                    const EngineConfig& config) {
  validate_penalty(penalty);
  require(config.tol > 0.0, ErrorCode::InvalidArgument, "tol must be positive");
  require(config.max_iter > 0, ErrorCode::InvalidArgument,
          "max_iter must be positive");

  AdmmResult out;
  IterationTrace& trace = out.trace;

  // Fixed rho does not need the bounds, but the monitor does when available.
  std::optional<CurvatureBounds> bounds;
  if (config.rho.mode == RhoMode::Auto) {
    bounds = obj.curvature_bounds();
  } else {
    try {
      bounds = obj.curvature_bounds();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotPositiveDefinite) throw;
      trace.warnings.push_back(
          "Hessian not positive definite; sufficient-decrease rate unknown");
    }
  }
  const double rho = bounds ? rho_from_bounds(*bounds, config.rho) : compute_rho(obj, config.rho);
  trace.rho = rho;
  if (bounds) {
    trace.bounds = *bounds;
    trace.tau1 = sufficient_decrease_rate(*bounds, rho);
    if (trace.tau1 <= 0.0) {
      trace.warnings.push_back(
          "rho is below 2 l^2 / a; sufficient decrease is not guaranteed");
    }
  } else {
    trace.tau1 = std::numeric_limits<double>::quiet_NaN();
  }
  if (const auto* mcp = std::get_if<McpPenalty>(&penalty)) {
    if (mcp->variant == McpVariant::Exact &&
        mcp_exact_ill_conditioned(mcp->params, rho)) {
      trace.warnings.push_back(
          "MCP proximal denominator 1 - 1/(gamma rho) is below 1e-8");
    }
  }

  const WUpdater update_w(obj, rho);
  AdmmState& s = out.state;
  s = AdmmState::zeros(obj.dim());
  s.lagrangian = augmented_lagrangian(obj, penalty, s, rho);
  trace.initial_lagrangian = s.lagrangian;
  trace.records.reserve(static_cast<std::size_t>(std::min(config.max_iter, 100000)));

  for (int k = 0; k < config.max_iter; ++k) {
    const Vector u_next = vector_prox(s.w - s.upsilon / rho, penalty, rho);
    const Vector w_next = update_w(u_next, s.upsilon);
    const Vector v_next = dual_update(s.upsilon, u_next, w_next, rho);

    IterationRecord rec;
    rec.iter = k + 1;
    rec.primal_residual = (u_next - w_next).norm();
    rec.dual_residual = rho * (u_next - s.u).norm();
    rec.w_step_sq = (w_next - s.w).squaredNorm();

    const double prev_l = s.lagrangian;
    s.w = w_next;
    s.u = u_next;
    s.upsilon = v_next;
    s.iter = k + 1;

    if (!all_finite(s)) {
      std::ostringstream os;
      os << "non-finite iterate at iteration " << (k + 1);
      throw NonFiniteError(os.str(), trace);
    }

    rec.psi = obj.value(s.w);
    s.lagrangian = lagrangian_from_psi(rec.psi, penalty, s, rho);
    rec.lagrangian = s.lagrangian;
    rec.support_size = (s.u.array().abs() > config.zero_tol).count();
    const double tau = std::isfinite(trace.tau1) ? trace.tau1 : 0.0;
    rec.sd_slack = (prev_l - s.lagrangian) - tau * rec.w_step_sq;
    const Vector grad = obj.hessian() * s.w - obj.linear_term();
    rec.stationarity_gap =
        (grad - s.upsilon).norm() / std::max(1.0, s.upsilon.norm());
    trace.records.push_back(rec);

    if (!std::isfinite(rec.psi)) {
      throw NonFiniteError("non-finite objective value", trace);
    }
    if (std::max(rec.primal_residual, rec.dual_residual) < config.tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

DecreaseCheck check_sufficient_decrease(const IterationTrace& trace,
                                        double tau1) {
  require(trace.records.size() >= 2, ErrorCode::InvalidArgument,
          "sufficient-decrease check needs at least two iterations");
  DecreaseCheck out;
  out.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < trace.records.size(); ++k) {
    const auto& prev = trace.records[k - 1];
    const auto& cur = trace.records[k];
    const double rise = cur.lagrangian - prev.lagrangian;
    const double allowed = -tau1 * cur.w_step_sq + 1e-10;
    const double slack = allowed - rise;
    if (slack < out.worst_slack) out.worst_slack = slack;
    if (rise > allowed && out.holds) {
      out.holds = false;
      out.first_violation = k;
    }
  }
  return out;
}

}  // namespace ftrbf
