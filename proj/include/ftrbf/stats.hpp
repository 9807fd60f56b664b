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

#include <vector>

namespace ftrbf {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

/// t such that P(T <= t) = p.
double student_t_quantile(double p, double df);

struct PairedTTest {
  double mean_diff = 0.0;  // mean of b - a
  double std_dev = 0.0;    // sample std of the differences
  double t_value = 0.0;    // +-infinity when differences are constant
  double p_two_sided = 1.0;
  double p_one_sided = 0.5;  // P(T >= t), i.e. H1: mean_diff > 0
  double ci_low = 0.0;       // 95% interval for the mean difference
  double ci_high = 0.0;
  int n = 0;
  double critical_one_tailed = 0.0;  // t_{0.95, n-1}
};

/// Paired t statistics on d = b - a. With errors as inputs a positive
/// mean_diff means `a` is better.
PairedTTest paired_t_test(const std::vector<double>& a,
                          const std::vector<double>& b);

}  // namespace ftrbf
