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

#include "ftrbf/error.hpp"
#include "ftrbf/prox.hpp"
#include "oracles.hpp"

using namespace ftrbf;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("soft_threshold") {
  CHECK(soft_threshold(3, 1) == 2);
  CHECK(soft_threshold(-0.5, 1) == 0);
  CHECK(soft_threshold(-2, 0.5) == -1.5);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5, 5), e(0, 3);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng), eta = e(rng);
    CHECK(std::abs(soft_threshold(a, eta) - soft_threshold(b, eta)) <=
          std::abs(a - b) * (1 + 1e-12));
    CHECK(soft_threshold(-a, eta) == -soft_threshold(a, eta));
  }
}

TEST_CASE("mcp_penalty") {
  const McpParams p{1.0, 2.0};
  CHECK(mcp_penalty(0, p) == 0);
  CHECK(mcp_penalty(5, p) == 1.0);
  CHECK(mcp_penalty(1, p) == 0.75);
  CHECK(mcp_penalty(-1, p) == 0.75);
}

TEST_CASE("mcp_prox_exact") {
  const McpParams p{1.0, 2.0};
  SUBCASE("rho above 1/gamma") {
    CHECK(mcp_prox_exact(1.5, p, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    const auto g = oracle::mcp_prox_grid(1.5, 1.0, 2.0, 1.0, 1e-5);
    CHECK(std::abs(g.arg - 1.0) <= 1e-5);
  }
  SUBCASE("pass-through beyond every threshold") {
    for (double rho : {0.1, 0.25, 0.5, 1.0, 7.0}) CHECK(mcp_prox_exact(10, p, rho) == 10);
  }
  SUBCASE("rho below 1/gamma") {
    CHECK(mcp_prox_exact(2, p, 0.25) == 0.0);
    const double at0 = oracle::mcp_prox_objective(0, 2, 1, 2, 0.25);
    const double atz = oracle::mcp_prox_objective(2, 2, 1, 2, 0.25);
    CHECK(at0 < atz);
    CHECK(oracle::mcp_prox_grid(2, 1, 2, 0.25, 1e-5).arg == 0.0);
  }
  SUBCASE("rho equal to 1/gamma") {
    CHECK(mcp_prox_exact(1.9, p, 0.5) == 0.0);
    CHECK(mcp_prox_exact(2.1, p, 0.5) == 2.1);
    CHECK(mcp_prox_exact(1.9, p, 0.5 * (1 + 1e-13)) == 0.0);
  }
  SUBCASE("agrees with a grid search on random tuples") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> lam(0.1, 5), gam(1.01, 10), rh(0.05, 20),
        zz(-10, 10);
    for (int i = 0; i < 300; ++i) {
      const double l = lam(rng), g = gam(rng), r = rh(rng), z = zz(rng);
      const double u = mcp_prox_exact(z, {l, g}, r);
      const auto best = oracle::mcp_prox_grid(z, l, g, r, 1e-4);
      const double fu = oracle::mcp_prox_objective(u, z, l, g, r);
      CHECK(fu <= best.value + 1e-6);
      CHECK(std::abs(u - best.arg) < 1e-3);
    }
  }
  SUBCASE("odd in z") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> zz(-10, 10);
    for (int i = 0; i < 500; ++i) {
      const double z = zz(rng);
      for (double rho : {0.1, 0.5, 3.0}) {
        CHECK(mcp_prox_exact(-z, p, rho) == -mcp_prox_exact(z, p, rho));
        CHECK(mcp_prox_unified(-z, p, rho) == -mcp_prox_unified(z, p, rho));
      }
    }
  }
  SUBCASE("ill-conditioned denominator is detectable") {
    CHECK(mcp_exact_ill_conditioned({1.0, 2.0}, 0.5 + 1e-10));
    CHECK_FALSE(mcp_exact_ill_conditioned({1.0, 2.0}, 1.0));
  }
}

TEST_CASE("mcp_prox_unified") {
  CHECK(mcp_prox_unified(0.999, {1.0, 1.001}, 1.0) == 0.0);
  CHECK(mcp_prox_unified(5.0, {1.0, 2.0}, 1.0) == 5.0);
  CHECK(mcp_prox_unified(1.5, {1.0, 2.0}, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> zz(-8, 8), lam(0.1, 3);
  for (int i = 0; i < 500; ++i) {
    const double z = zz(rng), l = lam(rng);
    CHECK(std::abs(mcp_prox_unified(z, {l, 1e6}, 1.0) - soft_threshold(z, l)) < 1e-5);
    const double g = 1 + 1e-9;
    const double h = mcp_prox_unified(z, {l, g}, 1.0);
    if (std::abs(z) < l)
      CHECK(h == 0.0);
    else if (std::abs(z) > g * l)
      CHECK(h == z);
  }
}

TEST_CASE("hard_threshold") {
  CHECK(hard_threshold(vec({0.5, -3, 2, 0.1}), 2) == vec({0, -3, 2, 0}));
  CHECK(hard_threshold(vec({1, -1, 1}), 2) == vec({1, -1, 0}));
  CHECK(hard_threshold(vec({1, 2, 3}), 0) == vec({0, 0, 0}));
  const Vector z = vec({4, -1, 0.3, 2});
  CHECK(hard_threshold(z, 4) == z);
  CHECK_THROWS_AS(hard_threshold(z, 5), Error);
  CHECK_THROWS_AS(hard_threshold(z, -1), Error);

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> msz(1, 10);
  std::normal_distribution<double> nd;
  for (int rep = 0; rep < 300; ++rep) {
    const int m = msz(rng);
    const int k = std::uniform_int_distribution<int>(0, m)(rng);
    Vector zr(m);
    for (int i = 0; i < m; ++i) zr(i) = nd(rng);
    const Vector u = hard_threshold(zr, k);
    CHECK((u.array() != 0.0).count() <= k);
    CHECK((zr - u).squaredNorm() <= oracle::best_k_sparse_residual(zr, k) * (1 + 1e-12) + 1e-15);
    CHECK(hard_threshold(-zr, k) == -u);
  }
}

TEST_CASE("vector_prox dispatch") {
  CHECK(vector_prox(vec({3, -0.5}), L1Penalty{1.0}, 1.0) == vec({2, 0}));
  CHECK(vector_prox(vec({3, -0.5}), L1Penalty{1.0}, 2.0) == vec({2.5, 0}));
  CHECK(vector_prox(vec({5, -2, 1}), CardinalityPenalty{0}, 1.0).isZero(0.0));
  const Vector m = vector_prox(vec({1.5, 10}), McpPenalty{{1, 2}, McpVariant::Exact}, 1.0);
  CHECK(m(0) == doctest::Approx(1.0));
  CHECK(m(1) == 10.0);
  const Vector z = vec({0.3, -4, 2});
  CHECK(vector_prox(z, NoPenalty{}, 3.0) == z);
  CHECK(vector_prox(z, McpPenalty{{1, 2}, McpVariant::Unified}, 0.1) ==
        vec({mcp_prox_unified(0.3, {1, 2}, 0.1), -4, mcp_prox_unified(2, {1, 2}, 0.1)}));
  CHECK_THROWS_AS(vector_prox(z, McpPenalty{{1, 0.5}, McpVariant::Exact}, 1.0), Error);
  CHECK_THROWS_AS(vector_prox(z, L1Penalty{-1}, 1.0), Error);
}

TEST_CASE("penalty_value") {
  CHECK(penalty_value(vec({1, -2}), L1Penalty{0.5}) == 1.5);
  CHECK(penalty_value(vec({1, 5}), McpPenalty{{1, 2}, McpVariant::Exact}) == 1.75);
  CHECK(penalty_value(vec({1, 0, 2}), CardinalityPenalty{2}) == 0.0);
  CHECK(std::isinf(penalty_value(vec({1, 3, 2}), CardinalityPenalty{2})));
  CHECK(penalty_value(vec({1, 3}), NoPenalty{}) == 0.0);
}
