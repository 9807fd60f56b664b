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

// Shared fixtures for the unit and acceptance tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>

#include "ftrbf/data_io.hpp"
#include "ftrbf/design.hpp"
#include "ftrbf/solvers.hpp"

namespace ftrbf::testing {

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c,
                            double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = u(rng);
  return m;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double lo = -1.0,
                            double hi = 1.0) {
  return random_matrix(rng, n, 1, lo, hi).col(0);
}

struct Instance {
  std::shared_ptr<const DesignMatrix> design;
  Vector y;
};

/// Inputs in [0,1]^k, the first m inputs double as centers.
inline Instance random_instance(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m,
                                Eigen::Index k = 2, double width = 0.5) {
  const Matrix x = random_matrix(rng, n, k, 0.0, 1.0);
  const Matrix c = x.topRows(m);
  auto d = std::make_shared<const DesignMatrix>(DesignMatrix::build(x, c, width));
  return {d, random_vector(rng, n)};
}

/// Desk-scale sinc problem: 400 noisy samples split 200/200, every training
/// input a center, width 1.
struct SincProblem {
  std::shared_ptr<const DesignMatrix> train;
  Vector y_train;
  DesignMatrix test;
  Vector y_test;

  EvalSet eval() const { return {&test, &y_test}; }
};

inline SincProblem sinc_problem(std::uint64_t seed, double noise = 0.05) {
  const Dataset all = synthetic_sinc(400, noise, seed);
  auto [tr, te] = split(all, SplitSpec{200, seed});
  auto d = std::make_shared<const DesignMatrix>(
      DesignMatrix::build(tr.inputs, tr.inputs, 1.0));
  DesignMatrix test = d->evaluate(te.inputs);
  return {d, tr.targets, std::move(test), te.targets};
}

/// Bisects lambda on a log scale until the fit uses a support size close to
/// target. Support size is not monotone in lambda for nonconvex penalties,
/// so the closest report seen is returned.
inline FitReport fit_for_node_count(const SmoothObjective& obj, SolverConfig cfg,
                                    Eigen::Index target, const EvalSet& test,
                                    double lo = 1e-4, double hi = 1.0, int steps = 18) {
  std::optional<FitReport> best;
  for (int s = 0; s < steps; ++s) {
    const double mid = std::sqrt(lo * hi);
    cfg.lambda = mid;
    FitReport r = fit(obj, cfg, test);
    const auto gap = std::abs(r.n_centers_used - target);
    if (!best || gap < std::abs(best->n_centers_used - target)) best = r;
    if (r.n_centers_used == target) break;
    if (r.n_centers_used > target)
      lo = mid;
    else
      hi = mid;
  }
  return *best;
}

}  // namespace ftrbf::testing
