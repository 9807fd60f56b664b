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

#include <memory>
#include <mutex>
#include <optional>

#include <Eigen/Dense>

#include "ftrbf/fault_spec.hpp"

namespace ftrbf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Gaussian RBF design matrix A with A(i,j) = exp(-|x_i - c_j|^2 / width).
///
/// The centers and width are retained so that held-out inputs can be
/// evaluated against exactly the same basis (see evaluate()). A^T A is
/// cached at construction; the object is immutable afterwards.
class DesignMatrix {
 public:
  /// Rows of `inputs` and `centers` are points; both must share the column
  /// (feature) count. Throws on dimension mismatch or width <= 0.
  static DesignMatrix build(const Matrix& inputs, const Matrix& centers,
                            double width);

  /// Design matrix of new inputs against this basis.
  DesignMatrix evaluate(const Matrix& inputs) const;

  const Matrix& entries() const { return entries_; }
  const Matrix& gram() const { return gram_; }
  const Matrix& centers() const { return centers_; }
  Eigen::Index n_samples() const { return entries_.rows(); }
  Eigen::Index n_centers() const { return entries_.cols(); }
  double width() const { return width_; }

  /// A^T y for a target vector of length n_samples().
  Vector cross(const Vector& y) const;

 private:
  DesignMatrix() = default;

  Matrix entries_;
  Matrix gram_;
  Matrix centers_;
  double width_ = 0.0;
};

/// R = (P + s2) diag(A^T A)/N - (P/N) A^T A.
struct FaultRegularizer {
  Matrix matrix;
};

FaultRegularizer build_regularizer(const DesignMatrix& design,
                                   const FaultSpec& fault);

struct CurvatureBounds {
  double lipschitz = 0.0;         // largest Hessian eigenvalue
  double strong_convexity = 0.0;  // smallest Hessian eigenvalue
};

/// psi(w) = (1/N)|y - A w|^2 + w^T R w, the fault-averaged training error
/// with its weight-independent constant removed.
class SmoothObjective {
 public:
  SmoothObjective(std::shared_ptr<const DesignMatrix> design, Vector targets,
                  const FaultSpec& fault);

  double value(const Vector& w) const;
  Vector gradient(const Vector& w) const;

  /// (2/N) A^T A + 2R; constant because psi is quadratic.
  const Matrix& hessian() const { return hessian_; }

  /// (2/N) A^T y, the linear term of the normal equations.
  const Vector& linear_term() const { return linear_; }

  /// Extreme eigenvalues of the Hessian via a dense symmetric
  /// eigendecomposition, computed once and cached. Throws
  /// NotPositiveDefinite instead of clamping.
  CurvatureBounds curvature_bounds() const;

  /// Unconstrained minimizer of psi (Cholesky on the Hessian).
  Vector minimizer() const;

  const DesignMatrix& design() const { return *design_; }
  const std::shared_ptr<const DesignMatrix>& design_ptr() const {
    return design_;
  }
  const Vector& targets() const { return targets_; }
  const FaultRegularizer& regularizer() const { return regularizer_; }
  const FaultSpec& fault() const { return fault_; }
  Eigen::Index dim() const { return hessian_.rows(); }

 private:
  void check_length(const Vector& w) const;

  std::shared_ptr<const DesignMatrix> design_;
  Vector targets_;
  FaultSpec fault_;
  FaultRegularizer regularizer_;
  Matrix hessian_;
  Vector linear_;
  mutable std::mutex bounds_mutex_;
  mutable std::optional<CurvatureBounds> bounds_;
};

/// Extreme eigenvalues of a symmetric matrix; throws NotPositiveDefinite
/// when the smallest is not safely above zero relative to the largest.
CurvatureBounds symmetric_curvature_bounds(const Matrix& hessian);

}  // namespace ftrbf
