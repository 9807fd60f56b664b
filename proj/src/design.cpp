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

#include "ftrbf/design.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ftrbf/error.hpp"

namespace ftrbf {

void FaultSpec::validate() const {
  if (!(open_prob >= 0.0 && open_prob < 1.0)) {
    std::ostringstream os;
    os << "open-fault probability must lie in [0, 1), got " << open_prob;
    fail(ErrorCode::InvalidArgument, os.str());
  }
  if (!(mult_var >= 0.0) || !std::isfinite(mult_var)) {
    std::ostringstream os;
    os << "multiplicative noise variance must be >= 0, got " << mult_var;
    fail(ErrorCode::InvalidArgument, os.str());
  }
}

namespace {

Matrix symmetric_gram(const Matrix& a) {
  Matrix g = Matrix::Zero(a.cols(), a.cols());
  g.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
  return g.selfadjointView<Eigen::Lower>();
}

Matrix kernel_entries(const Matrix& inputs, const Matrix& centers,
                      double width) {
  const Eigen::Index n = inputs.rows();
  const Eigen::Index m = centers.rows();
  Matrix out(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d2 = (inputs.row(i) - centers.row(j)).squaredNorm();
      out(i, j) = std::exp(-d2 / width);
    }
  }
  return out;
}

}  // namespace

DesignMatrix DesignMatrix::build(const Matrix& inputs, const Matrix& centers,
                                 double width) {
  require(width > 0.0 && std::isfinite(width), ErrorCode::InvalidArgument,
          "RBF width must be positive");
  if (inputs.cols() != centers.cols()) {
    std::ostringstream os;
    os << "inputs have " << inputs.cols() << " features but centers have "
       << centers.cols();
    fail(ErrorCode::DimensionMismatch, os.str());
  }
  require(inputs.rows() > 0 && centers.rows() > 0, ErrorCode::InvalidArgument,
          "design needs at least one sample and one center");

  DesignMatrix d;
  d.width_ = width;
  d.centers_ = centers;
  d.entries_ = kernel_entries(inputs, centers, width);
  d.gram_ = symmetric_gram(d.entries_);
  return d;
}

DesignMatrix DesignMatrix::evaluate(const Matrix& inputs) const {
  return build(inputs, centers_, width_);
}

Vector DesignMatrix::cross(const Vector& y) const {
  require(y.size() == n_samples(), ErrorCode::DimensionMismatch,
          "target length does not match the number of samples");
  return entries_.transpose() * y;
}

FaultRegularizer build_regularizer(const DesignMatrix& design,
                                   const FaultSpec& fault) {
  fault.validate();
  const double n = static_cast<double>(design.n_samples());
  const Matrix& g = design.gram();
  FaultRegularizer r;
  r.matrix = (-fault.open_prob / n) * g;
  r.matrix.diagonal() += ((fault.open_prob + fault.mult_var) / n) * g.diagonal();
  return r;
}

CurvatureBounds symmetric_curvature_bounds(const Matrix& hessian) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hessian, Eigen::EigenvaluesOnly);
  require(eig.info() == Eigen::Success, ErrorCode::NotPositiveDefinite,
          "eigendecomposition of the Hessian failed");
  const Vector& ev = eig.eigenvalues();
  CurvatureBounds b;
  b.strong_convexity = ev(0);
  b.lipschitz = ev(ev.size() - 1);
  const double floor = static_cast<double>(hessian.rows()) *
                       std::numeric_limits<double>::epsilon() * b.lipschitz;
  if (!(b.lipschitz > 0.0) || !(b.strong_convexity > floor)) {
    std::ostringstream os;
    os << "Hessian is not positive definite (eigenvalues in ["
       << b.strong_convexity << ", " << b.lipschitz << "])";
    fail(ErrorCode::NotPositiveDefinite, os.str());
  }
  return b;
}

SmoothObjective::SmoothObjective(std::shared_ptr<const DesignMatrix> design,
                                 Vector targets, const FaultSpec& fault)
    : design_(std::move(design)), targets_(std::move(targets)), fault_(fault) {
  require(design_ != nullptr, ErrorCode::InvalidArgument, "null design");
  require(targets_.size() == design_->n_samples(),
          ErrorCode::DimensionMismatch,
          "target length does not match the number of samples");
  regularizer_ = build_regularizer(*design_, fault_);
  const double n = static_cast<double>(design_->n_samples());
  hessian_ = (2.0 / n) * design_->gram() + 2.0 * regularizer_.matrix;
  hessian_ = 0.5 * (hessian_ + hessian_.transpose()).eval();
  linear_ = (2.0 / n) * design_->cross(targets_);
}

void SmoothObjective::check_length(const Vector& w) const {
  if (w.size() != dim()) {
    std::ostringstream os;
    os << "weight vector has length " << w.size() << ", expected " << dim();
    fail(ErrorCode::DimensionMismatch, os.str());
  }
}

double SmoothObjective::value(const Vector& w) const {
  check_length(w);
  const double n = static_cast<double>(design_->n_samples());
  const Vector r = targets_ - design_->entries() * w;
  return r.squaredNorm() / n + w.dot(regularizer_.matrix * w);
}

Vector SmoothObjective::gradient(const Vector& w) const {
  check_length(w);
  const double n = static_cast<double>(design_->n_samples());
  const Vector r = targets_ - design_->entries() * w;
  return (-2.0 / n) * (design_->entries().transpose() * r) +
         2.0 * (regularizer_.matrix * w);
}

CurvatureBounds SmoothObjective::curvature_bounds() const {
  std::lock_guard<std::mutex> lock(bounds_mutex_);
  if (!bounds_) bounds_ = symmetric_curvature_bounds(hessian_);
  return *bounds_;
}

Vector SmoothObjective::minimizer() const {
  Eigen::LLT<Matrix> llt(hessian_);
  require(llt.info() == Eigen::Success, ErrorCode::NotPositiveDefinite,
          "Hessian is not positive definite; psi has no unique minimizer");
  return llt.solve(linear_);
}

}  // namespace ftrbf
