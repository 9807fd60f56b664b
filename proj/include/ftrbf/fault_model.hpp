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
#include <random>

#include "ftrbf/design.hpp"
#include "ftrbf/fault_spec.hpp"

namespace ftrbf {

/// One realization of the concurrent fault: weight j becomes
/// (w_j + b_j w_j) * beta_j.
struct FaultPattern {
  Vector mult_noise;  // b_j
  Vector open_mask;   // beta_j in {0, 1}
};

/// b_j ~ N(0, mult_var) and beta_j ~ Bernoulli(1 - open_prob), i.i.d.
FaultPattern sample_pattern(const FaultSpec& fault, Eigen::Index m,
                            std::uint64_t seed);
FaultPattern sample_pattern(const FaultSpec& fault, Eigen::Index m,
                            std::mt19937_64& rng);

Vector faulty_weights(const Vector& w, const FaultPattern& pattern);

/// Expected squared error over all fault patterns, in closed form:
///   (P/N) sum y^2 + ((1-P)/N)|y - A w|^2
///     + ((1-P)/N) w^T [(P + s2) diag(A^T A) - P A^T A] w
double average_train_error(const DesignMatrix& design, const Vector& y,
                           const Vector& w, const FaultSpec& fault);

/// Same expectation on a held-out design. The design must come from
/// DesignMatrix::evaluate() on the training basis.
double average_test_error(const DesignMatrix& test_design, const Vector& y_test,
                          const Vector& w, const FaultSpec& fault);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::int64_t samples = 0;
};

/// Monte-Carlo mean of (1/N)|y - A w~|^2 over independent fault patterns.
MonteCarloEstimate simulate_faulty_error(const DesignMatrix& design,
                                         const Vector& y, const Vector& w,
                                         const FaultSpec& fault,
                                         std::int64_t n_samples,
                                         std::uint64_t seed);

}  // namespace ftrbf
