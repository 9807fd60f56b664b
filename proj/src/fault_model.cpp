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

#include "ftrbf/fault_model.hpp"

#include <cmath>
#include <sstream>

#include "ftrbf/error.hpp"

namespace ftrbf {

FaultPattern sample_pattern(const FaultSpec& fault, Eigen::Index m,
                            std::mt19937_64& rng) {
  fault.validate();
  require(m >= 1, ErrorCode::InvalidArgument, "pattern length must be >= 1");
  FaultPattern p;
  p.mult_noise = Vector::Zero(m);
  p.open_mask = Vector::Ones(m);
  if (fault.mult_var > 0.0) {
    std::normal_distribution<double> noise(0.0, std::sqrt(fault.mult_var));
    for (Eigen::Index j = 0; j < m; ++j) p.mult_noise(j) = noise(rng);
  }
  if (fault.open_prob > 0.0) {
    std::bernoulli_distribution open(fault.open_prob);
    for (Eigen::Index j = 0; j < m; ++j) p.open_mask(j) = open(rng) ? 0.0 : 1.0;
  }
  return p;
}

FaultPattern sample_pattern(const FaultSpec& fault, Eigen::Index m,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_pattern(fault, m, rng);
}

Vector faulty_weights(const Vector& w, const FaultPattern& pattern) {
  require(w.size() == pattern.mult_noise.size() &&
              w.size() == pattern.open_mask.size(),
          ErrorCode::DimensionMismatch,
          "fault pattern length does not match the weights");
  return ((w.array() + pattern.mult_noise.array() * w.array()) *
          pattern.open_mask.array())
      .matrix();
}

namespace {

void check_dims(const DesignMatrix& design, const Vector& y, const Vector& w) {
  if (y.size() != design.n_samples() || w.size() != design.n_centers()) {
    std::ostringstream os;
    os << "design is " << design.n_samples() << "x" << design.n_centers()
       << " but got " << y.size() << " targets and " << w.size() << " weights";
    fail(ErrorCode::DimensionMismatch, os.str());
  }
}

double expected_error(const DesignMatrix& design, const Vector& y,
                      const Vector& w, const FaultSpec& fault) {
  fault.validate();
  check_dims(design, y, w);
  const double n = static_cast<double>(design.n_samples());
  const double p = fault.open_prob;
  const Vector aw = design.entries() * w;
  const double fit = (y - aw).squaredNorm();
  const double diag_term =
      (design.gram().diagonal().array() * w.array().square()).sum();
  const double quad = (p + fault.mult_var) * diag_term - p * aw.squaredNorm();
  return (p / n) * y.squaredNorm() + ((1.0 - p) / n) * fit +
         ((1.0 - p) / n) * quad;
}

}  // namespace

double average_train_error(const DesignMatrix& design, const Vector& y,
                           const Vector& w, const FaultSpec& fault) {
  return expected_error(design, y, w, fault);
}

double average_test_error(const DesignMatrix& test_design, const Vector& y_test,
                          const Vector& w, const FaultSpec& fault) {
  if (w.size() != test_design.n_centers()) {
    std::ostringstream os;
    os << "test design has " << test_design.n_centers()
       << " centers but the weight vector has " << w.size();
    fail(ErrorCode::DimensionMismatch, os.str());
  }
  return expected_error(test_design, y_test, w, fault);
}

MonteCarloEstimate simulate_faulty_error(const DesignMatrix& design,
                                         const Vector& y, const Vector& w,
                                         const FaultSpec& fault,
                                         std::int64_t n_samples,
                                         std::uint64_t seed) {
  fault.validate();
  check_dims(design, y, w);
  require(n_samples >= 1, ErrorCode::InvalidArgument,
          "Monte-Carlo sample count must be >= 1");
  const double n = static_cast<double>(design.n_samples());
  std::mt19937_64 rng(seed);

  // Welford running moments.
  double mean = 0.0;
  double m2 = 0.0;
  Vector residual(design.n_samples());
  for (std::int64_t s = 0; s < n_samples; ++s) {
    const FaultPattern pat = sample_pattern(fault, w.size(), rng);
    const Vector wt = faulty_weights(w, pat);
    residual.noalias() = y - design.entries() * wt;
    const double e = residual.squaredNorm() / n;
    const double delta = e - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (e - mean);
  }
  MonteCarloEstimate est;
  est.mean = mean;
  est.samples = n_samples;
  if (n_samples > 1) {
    const double var = m2 / static_cast<double>(n_samples - 1);
    est.std_err = std::sqrt(var / static_cast<double>(n_samples));
  }
  return est;
}

}  // namespace ftrbf
