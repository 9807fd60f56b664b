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

#include "ftrbf/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "ftrbf/error.hpp"

namespace ftrbf {

void McpParams::validate() const {
  require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::InvalidArgument,
          "MCP lambda must be positive");
  require(gamma > 1.0 && std::isfinite(gamma), ErrorCode::InvalidArgument,
          "MCP gamma must exceed 1");
}

void validate_penalty(const Penalty& penalty) {
  if (const auto* l1 = std::get_if<L1Penalty>(&penalty)) {
    require(l1->lambda >= 0.0 && std::isfinite(l1->lambda),
            ErrorCode::InvalidArgument, "l1 lambda must be >= 0");
  } else if (const auto* mcp = std::get_if<McpPenalty>(&penalty)) {
    mcp->params.validate();
  } else if (const auto* card = std::get_if<CardinalityPenalty>(&penalty)) {
    require(card->k >= 0, ErrorCode::InvalidArgument,
            "cardinality bound must be >= 0");
  }
}

double soft_threshold(double z, double eta) {
  const double mag = std::abs(z) - eta;
  if (mag <= 0.0) return 0.0;
  return std::copysign(mag, z);
}

double mcp_penalty(double w, const McpParams& p) {
  const double a = std::abs(w);
  if (a <= p.gamma * p.lambda) return p.lambda * a - w * w / (2.0 * p.gamma);
  return 0.5 * p.gamma * p.lambda * p.lambda;
}

double mcp_prox_exact(double z, const McpParams& p, double rho) {
  const double az = std::abs(z);
  const double knee = p.gamma * p.lambda;
  const double balance = rho * p.gamma - 1.0;
  if (std::abs(balance) <= 1e-12) {
    // rho == 1/gamma: linear inside the knee, so 0 or pass-through.
    return az <= knee ? 0.0 : z;
  }
  if (balance > 0.0) {
    if (az > knee) return z;
    return soft_threshold(z, p.lambda / rho) / (1.0 - 1.0 / (p.gamma * rho));
  }
  // Concave inside the knee: the minimizer is 0 or z.
  const double cut = std::sqrt(p.gamma / rho) * p.lambda;
  return az <= cut ? 0.0 : z;
}

double mcp_prox_unified(double z, const McpParams& p, double /*rho*/) {
  if (std::abs(z) > p.gamma * p.lambda) return z;
  return soft_threshold(z, p.lambda) / (1.0 - 1.0 / p.gamma);
}

bool mcp_exact_ill_conditioned(const McpParams& p, double rho) {
  const double denom = 1.0 - 1.0 / (p.gamma * rho);
  return rho * p.gamma > 1.0 + 1e-12 && denom < 1e-8;
}

Vector hard_threshold(const Vector& z, Eigen::Index k) {
  if (k < 0 || k > z.size()) {
    std::ostringstream os;
    os << "hard threshold keeps " << k << " entries of a length-" << z.size()
       << " vector";
    fail(ErrorCode::InvalidArgument, os.str());
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(z.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&z](Eigen::Index a, Eigen::Index b) {
                     return std::abs(z(a)) > std::abs(z(b));
                   });
  Vector out = Vector::Zero(z.size());
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index j = order[static_cast<std::size_t>(i)];
    out(j) = z(j);
  }
  return out;
}

namespace {

template <class F>
Vector map_coordinates(const Vector& z, F&& f) {
  Vector out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) out(i) = f(z(i));
  return out;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Vector vector_prox(const Vector& z, const Penalty& penalty, double rho) {
  require(rho > 0.0, ErrorCode::InvalidArgument, "rho must be positive");
  validate_penalty(penalty);
  return std::visit(
      Overloaded{
          [&](const NoPenalty&) -> Vector { return z; },
          [&](const L1Penalty& p) -> Vector {
            const double eta = p.lambda / rho;
            return map_coordinates(z, [eta](double v) {
              return soft_threshold(v, eta);
            });
          },
          [&](const McpPenalty& p) -> Vector {
            if (p.variant == McpVariant::Unified) {
              return map_coordinates(z, [&](double v) {
                return mcp_prox_unified(v, p.params, rho);
              });
            }
            return map_coordinates(
                z, [&](double v) { return mcp_prox_exact(v, p.params, rho); });
          },
          [&](const CardinalityPenalty& p) -> Vector {
            return hard_threshold(z, p.k);
          },
      },
      penalty);
}

double penalty_value(const Vector& u, const Penalty& penalty) {
  return std::visit(
      Overloaded{
          [](const NoPenalty&) { return 0.0; },
          [&](const L1Penalty& p) { return p.lambda * u.lpNorm<1>(); },
          [&](const McpPenalty& p) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < u.size(); ++i)
              s += mcp_penalty(u(i), p.params);
            return s;
          },
          [&](const CardinalityPenalty& p) {
            const auto nnz = (u.array() != 0.0).count();
            return nnz <= p.k ? 0.0 : std::numeric_limits<double>::infinity();
          },
      },
      penalty);
}

const char* penalty_name(const Penalty& penalty) {
  return std::visit(Overloaded{
                        [](const NoPenalty&) { return "none"; },
                        [](const L1Penalty&) { return "l1"; },
                        [](const McpPenalty& p) {
                          return p.variant == McpVariant::Exact ? "mcp-exact"
                                                                : "mcp-unified";
                        },
                        [](const CardinalityPenalty&) { return "l0-card"; },
                    },
                    penalty);
}

}  // namespace ftrbf
