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

#include <doctest.h>

#include <cmath>
#include <random>

#include "ftrbf/design.hpp"
#include "ftrbf/error.hpp"
#include "support.hpp"

using namespace ftrbf;
using ftrbf::testing::random_instance;
using ftrbf::testing::random_matrix;
using ftrbf::testing::random_vector;

namespace {

Matrix col(std::initializer_list<double> v) {
  Matrix m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

// N samples placed so far apart that A is the identity in double precision.
std::shared_ptr<const DesignMatrix> identity_design(Eigen::Index n) {
  Matrix x(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) x(i, 0) = 100.0 * static_cast<double>(i);
  return std::make_shared<const DesignMatrix>(DesignMatrix::build(x, x, 1.0));
}

std::shared_ptr<const DesignMatrix> scalar_design() {
  return std::make_shared<const DesignMatrix>(DesignMatrix::build(col({0.0}), col({0.0}), 1.0));
}

FaultSpec fault(double p, double s) {
  FaultSpec f;
  f.open_prob = p;
  f.mult_var = s;
  return f;
}

}  // namespace

TEST_CASE("design entries") {
  SUBCASE("zero distance gives one") {
    auto d = DesignMatrix::build(col({0.3}), col({0.3}), 0.7);
    CHECK(d.entries()(0, 0) == 1.0);
  }
  SUBCASE("unit normalized distance") {
    auto d = DesignMatrix::build(col({2.0}), col({0.0}), 4.0);
    CHECK(d.entries()(0, 0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  }
  SUBCASE("2x2 hand evaluation") {
    auto d = DesignMatrix::build(col({0, 1}), col({0, 1}), 1.0);
    const double e = std::exp(-1.0);
    CHECK(d.entries()(0, 0) == 1.0);
    CHECK(d.entries()(1, 1) == 1.0);
    CHECK(d.entries()(0, 1) == doctest::Approx(e).epsilon(1e-15));
    CHECK(d.entries()(1, 0) == doctest::Approx(e).epsilon(1e-15));
  }
  SUBCASE("entries match the kernel, lie in (0,1], gram is symmetric PSD") {
    std::mt19937_64 rng(11);
    const Matrix x = random_matrix(rng, 30, 3, 0.0, 1.0);
    const Matrix c = random_matrix(rng, 12, 3, 0.0, 1.0);
    auto d = DesignMatrix::build(x, c, 0.3);
    for (Eigen::Index i = 0; i < 30; ++i)
      for (Eigen::Index j = 0; j < 12; ++j) {
        const double ref = std::exp(-(x.row(i) - c.row(j)).squaredNorm() / 0.3);
        CHECK(d.entries()(i, j) == doctest::Approx(ref).epsilon(1e-15));
        CHECK(d.entries()(i, j) > 0.0);
        CHECK(d.entries()(i, j) <= 1.0);
      }
    const Matrix g = d.entries().transpose() * d.entries();
    CHECK((d.gram() - d.gram().transpose()).norm() == 0.0);
    CHECK((d.gram() - g).norm() <= 1e-12 * g.norm());
    Eigen::SelfAdjointEigenSolver<Matrix> es(d.gram());
    CHECK(es.eigenvalues().minCoeff() >= -1e-12 * es.eigenvalues().maxCoeff());
    const Vector y = random_vector(rng, 30);
    CHECK((d.cross(y) - d.entries().transpose() * y).norm() <= 1e-12);
  }
  SUBCASE("row permutation of inputs permutes rows of A") {
    std::mt19937_64 rng(12);
    const Matrix x = random_matrix(rng, 10, 2, 0.0, 1.0);
    const Matrix c = x.topRows(4);
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(10);
    perm.setIdentity();
    std::shuffle(perm.indices().data(), perm.indices().data() + 10, rng);
    auto a = DesignMatrix::build(x, c, 0.5);
    auto b = DesignMatrix::build(perm * x, c, 0.5);
    CHECK((perm * a.entries() - b.entries()).norm() == 0.0);
  }
  SUBCASE("evaluate reuses centers and width") {
    std::mt19937_64 rng(13);
    const Matrix x = random_matrix(rng, 8, 2);
    const Matrix z = random_matrix(rng, 5, 2);
    auto d = DesignMatrix::build(x, x.topRows(3), 0.9);
    auto e = d.evaluate(z);
    auto ref = DesignMatrix::build(z, x.topRows(3), 0.9);
    CHECK((e.entries() - ref.entries()).norm() == 0.0);
    CHECK(e.width() == 0.9);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(DesignMatrix::build(col({0}), col({0}), 0.0), Error);
    CHECK_THROWS_AS(DesignMatrix::build(col({0}), col({0}), -1.0), Error);
    CHECK_THROWS_AS(DesignMatrix::build(Matrix::Zero(2, 2), Matrix::Zero(2, 3), 1.0), Error);
  }
}

TEST_CASE("fault regularizer") {
  SUBCASE("fault-free is zero") {
    std::mt19937_64 rng(21);
    auto inst = random_instance(rng, 10, 5);
    CHECK(build_regularizer(*inst.design, FaultSpec::none()).matrix.norm() == 0.0);
  }
  SUBCASE("identity design, P = s = 0.5") {
    auto d = identity_design(2);
    const Matrix r = build_regularizer(*d, fault(0.5, 0.5)).matrix;
    CHECK((r - 0.25 * Matrix::Identity(2, 2)).norm() <= 1e-15);
  }
  SUBCASE("entrywise formula and symmetry") {
    std::mt19937_64 rng(22);
    auto inst = random_instance(rng, 15, 7);
    const double p = 0.05, s = 0.02;
    const Matrix r = build_regularizer(*inst.design, fault(p, s)).matrix;
    const Matrix& g = inst.design->gram();
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        const double ref = (i == j ? (p + s) * g(i, i) / 15 : 0.0) - p * g(i, j) / 15;
        CHECK(r(i, j) == doctest::Approx(ref).epsilon(1e-14).scale(1e-14));
      }
    CHECK((r - r.transpose()).norm() == 0.0);
  }
  SUBCASE("invalid fault levels") {
    auto d = identity_design(2);
    CHECK_THROWS_AS(build_regularizer(*d, fault(1.0, 0.0)), Error);
    CHECK_THROWS_AS(build_regularizer(*d, fault(-0.1, 0.0)), Error);
    CHECK_THROWS_AS(build_regularizer(*d, fault(0.1, -1e-3)), Error);
  }
}

TEST_CASE("psi and gradient") {
  SUBCASE("w = 0") {
    std::mt19937_64 rng(31);
    auto inst = random_instance(rng, 9, 4);
    SmoothObjective obj(inst.design, inst.y, fault(0.01, 0.01));
    CHECK(obj.value(Vector::Zero(4)) == doctest::Approx(inst.y.squaredNorm() / 9));
    const Vector g = obj.gradient(Vector::Zero(4));
    const Vector ref = -(2.0 / 9) * inst.design->entries().transpose() * inst.y;
    CHECK((g - ref).norm() <= 1e-14);
  }
  SUBCASE("scalar hand evaluations") {
    Vector y(1), w(1);
    y << 2;
    w << 2;
    CHECK(SmoothObjective(scalar_design(), y, FaultSpec::none()).value(w) == 0.0);
    w << 1;
    CHECK(SmoothObjective(scalar_design(), y, fault(0.0, 0.25)).value(w) ==
          doctest::Approx(1.25).epsilon(1e-15));
  }
  SUBCASE("stationary at the minimizer") {
    std::mt19937_64 rng(32);
    auto inst = random_instance(rng, 20, 6);
    SmoothObjective obj(inst.design, inst.y, fault(0.01, 0.01));
    CHECK(obj.gradient(obj.minimizer()).norm() <= 1e-10);
  }
  SUBCASE("central finite differences") {
    std::mt19937_64 rng(33);
    for (int rep = 0; rep < 20; ++rep) {
      auto inst = random_instance(rng, 25, 10, 2, 0.8);
      SmoothObjective obj(inst.design, inst.y, fault(0.02, 0.03));
      const Vector w = random_vector(rng, 10);
      const Vector g = obj.gradient(w);
      const double h = 1e-6 * std::max(1.0, w.cwiseAbs().maxCoeff());
      Vector fd(10);
      for (int j = 0; j < 10; ++j) {
        Vector a = w, b = w;
        a(j) += h;
        b(j) -= h;
        fd(j) = (obj.value(a) - obj.value(b)) / (2 * h);
      }
      CHECK((fd - g).norm() <= 1e-6 * std::max(1.0, g.norm()));
    }
  }
  SUBCASE("length mismatch") {
    std::mt19937_64 rng(34);
    auto inst = random_instance(rng, 5, 3);
    SmoothObjective obj(inst.design, inst.y, FaultSpec::none());
    CHECK_THROWS_AS(obj.value(Vector::Zero(4)), Error);
    CHECK_THROWS_AS(obj.gradient(Vector::Zero(2)), Error);
    CHECK_THROWS_AS(SmoothObjective(inst.design, Vector::Zero(4), FaultSpec::none()), Error);
  }
}

TEST_CASE("curvature bounds") {
  SUBCASE("scaled identity") {
    const auto b = symmetric_curvature_bounds(2.0 * Matrix::Identity(3, 3));
    CHECK(b.lipschitz == doctest::Approx(2.0));
    CHECK(b.strong_convexity == doctest::Approx(2.0));
  }
  SUBCASE("diagonal") {
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = 1;
    h(1, 1) = 4;
    const auto b = symmetric_curvature_bounds(h);
    CHECK(b.lipschitz == doctest::Approx(4.0));
    CHECK(b.strong_convexity == doctest::Approx(1.0));
  }
  SUBCASE("random SPD against a general eigen solver") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 10; ++rep) {
      const Matrix q = random_matrix(rng, 5, 5);
      const Matrix h = q * q.transpose() + 0.1 * Matrix::Identity(5, 5);
      // Independent oracle: nonsymmetric solver on the same matrix.
      Eigen::EigenSolver<Matrix> es(h);
      const Vector ev = es.eigenvalues().real();
      const auto b = symmetric_curvature_bounds(h);
      CHECK(std::abs(b.lipschitz - ev.maxCoeff()) <= 1e-8);
      CHECK(std::abs(b.strong_convexity - ev.minCoeff()) <= 1e-8);
    }
  }
  SUBCASE("not positive definite is reported") {
    Matrix h = Matrix::Identity(2, 2);
    h(1, 1) = -1;
    CHECK_THROWS_AS(symmetric_curvature_bounds(h), Error);
    CHECK_THROWS_AS(symmetric_curvature_bounds(Matrix::Zero(2, 2)), Error);
  }
  SUBCASE("Hessian of psi is PD under faults") {
    std::mt19937_64 rng(42);
    auto inst = random_instance(rng, 30, 10, 2, 0.5);
    SmoothObjective obj(inst.design, inst.y, fault(0.01, 0.01));
    const Matrix ref = (2.0 / 30) * inst.design->gram() + 2.0 * obj.regularizer().matrix;
    CHECK((obj.hessian() - ref).norm() <= 1e-12 * ref.norm());
    const auto b = obj.curvature_bounds();
    CHECK(b.strong_convexity > 0.0);
    CHECK(b.lipschitz >= b.strong_convexity);
  }
}

TEST_CASE("Lipschitz and strong convexity properties on random pairs") {
  std::mt19937_64 rng(51);
  auto inst = random_instance(rng, 40, 12, 2, 0.4);
  SmoothObjective obj(inst.design, inst.y, fault(0.01, 0.01));
  const auto b = obj.curvature_bounds();
  for (int rep = 0; rep < 200; ++rep) {
    const Vector w = random_vector(rng, 12, -3, 3);
    const Vector v = random_vector(rng, 12, -3, 3);
    const double dist = (w - v).norm();
    CHECK((obj.gradient(w) - obj.gradient(v)).norm() <= b.lipschitz * dist * (1 + 1e-10));
    const double lower =
        obj.value(w) + obj.gradient(w).dot(v - w) + 0.5 * b.strong_convexity * dist * dist;
    CHECK(obj.value(v) >= lower - 1e-10 * std::max(1.0, std::abs(lower)));
  }
}
