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

#include <variant>

#include <Eigen/Dense>

namespace ftrbf {

using Vector = Eigen::VectorXd;

struct McpParams {
  double lambda = 1.0;
  double gamma = 1.001;

  /// lambda > 0 and gamma > 1.
  void validate() const;
};

enum class McpVariant { Exact, Unified };

/// Penalty descriptors for the u-update. Each maps to a proximal operator.
struct NoPenalty {};
struct L1Penalty {
  double lambda = 0.0;
};
struct McpPenalty {
  McpParams params;
  McpVariant variant = McpVariant::Exact;
};
/// Indicator of {u : |u|_0 <= k}.
struct CardinalityPenalty {
  Eigen::Index k = 0;
};

using Penalty = std::variant<NoPenalty, L1Penalty, McpPenalty, CardinalityPenalty>;

void validate_penalty(const Penalty& penalty);

double soft_threshold(double z, double eta);

double mcp_penalty(double w, const McpParams& p);

/// Exact minimizer of P(u) + (rho/2)(z - u)^2 for the MCP penalty, using
/// the three-way split on rho versus 1/gamma. rho == 1/gamma is detected
/// with a relative tolerance of 1e-12.
double mcp_prox_exact(double z, const McpParams& p, double rho);

/// Unified approximation: S(z, lambda)/(1 - 1/gamma) for |z| <= gamma*lambda,
/// z otherwise. Independent of rho.
double mcp_prox_unified(double z, const McpParams& p, double rho);

/// True when the exact map divides by 1 - 1/(gamma*rho) < 1e-8.
bool mcp_exact_ill_conditioned(const McpParams& p, double rho);

/// Keeps the k largest-magnitude entries (ties go to the lower index).
Vector hard_threshold(const Vector& z, Eigen::Index k);

/// Coordinatewise proximal map of the penalty with parameter rho.
Vector vector_prox(const Vector& z, const Penalty& penalty, double rho);

/// g(u); +infinity when u violates a cardinality constraint.
double penalty_value(const Vector& u, const Penalty& penalty);

const char* penalty_name(const Penalty& penalty);

}  // namespace ftrbf
