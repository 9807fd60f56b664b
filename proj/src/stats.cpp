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

#include "ftrbf/stats.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "ftrbf/error.hpp"

namespace ftrbf {

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  fail(ErrorCode::NonFinite, "incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  require(a > 0.0 && b > 0.0, ErrorCode::InvalidArgument,
          "incomplete beta needs a, b > 0");
  require(x >= 0.0 && x <= 1.0, ErrorCode::InvalidArgument,
          "incomplete beta needs x in [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The fraction converges fast for x < (a+1)/(a+b+2); use symmetry otherwise.
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

namespace {

// P(|T| >= |t|). Near t = 0 the complementary form keeps t^2 from being
// absorbed into df.
double two_sided_tail(double t, double df) {
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  if (t2 < df) return 1.0 - incomplete_beta(0.5, 0.5 * df, t2 / (df + t2));
  return incomplete_beta(0.5 * df, 0.5, df / (df + t2));
}

}  // namespace

double student_t_cdf(double t, double df) {
  require(df > 0.0, ErrorCode::InvalidArgument, "degrees of freedom must be > 0");
  if (std::isnan(t)) return t;
  const double t2 = t * t;
  if (t2 < df) {
    const double half_mass = 0.5 * incomplete_beta(0.5, 0.5 * df, t2 / (df + t2));
    return t > 0.0 ? 0.5 + half_mass : 0.5 - half_mass;
  }
  const double tail = 0.5 * two_sided_tail(t, df);
  return t > 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df) {
  require(p > 0.0 && p < 1.0, ErrorCode::InvalidArgument,
          "quantile probability must lie in (0, 1)");
  require(df > 0.0, ErrorCode::InvalidArgument, "degrees of freedom must be > 0");
  double lo = -1.0;
  double hi = 1.0;
  while (student_t_cdf(lo, df) > p) lo *= 2.0;
  while (student_t_cdf(hi, df) < p) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, df) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

PairedTTest paired_t_test(const std::vector<double>& a,
                          const std::vector<double>& b) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch,
          "paired samples differ in length");
  require(a.size() >= 2, ErrorCode::InvalidArgument,
          "paired t-test needs at least two pairs");
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = b[i] - a[i];

  PairedTTest r;
  r.n = static_cast<int>(n);
  const double nn = static_cast<double>(n);
  const double df = nn - 1.0;
  r.mean_diff = std::accumulate(d.begin(), d.end(), 0.0) / nn;
  double ss = 0.0;
  for (double v : d) ss += (v - r.mean_diff) * (v - r.mean_diff);
  r.std_dev = std::sqrt(ss / df);
  r.critical_one_tailed = student_t_quantile(0.95, df);

  if (r.std_dev == 0.0) {
    r.ci_low = r.ci_high = r.mean_diff;
    if (r.mean_diff == 0.0) {
      r.t_value = 0.0;
      r.p_two_sided = 1.0;
      r.p_one_sided = 0.5;
    } else {
      r.t_value = std::copysign(std::numeric_limits<double>::infinity(), r.mean_diff);
      r.p_two_sided = 0.0;
      r.p_one_sided = r.mean_diff > 0.0 ? 0.0 : 1.0;
    }
    return r;
  }

  const double se = r.std_dev / std::sqrt(nn);
  r.t_value = r.mean_diff / se;
  r.p_two_sided = two_sided_tail(r.t_value, df);
  const double half = 0.5 * r.p_two_sided;
  r.p_one_sided = r.t_value > 0.0 ? half : 1.0 - half;
  const double crit = student_t_quantile(0.975, df);
  r.ci_low = r.mean_diff - crit * se;
  r.ci_high = r.mean_diff + crit * se;
  return r;
}

}  // namespace ftrbf
