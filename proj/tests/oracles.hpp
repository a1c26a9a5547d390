// Copyright 2026 The qisburst Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Closed-form oracles used by the unit and acceptance suites. Nothing here
// calls into the simulator.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

namespace qis::testing {

/// Poisson pmf p_0..p_{kmax} by the recurrence p_k = p_{k-1} * lambda / k.
inline std::vector<double> poisson_pmf(double lambda, int kmax) {
  std::vector<double> p(static_cast<std::size_t>(kmax) + 1);
  p[0] = std::exp(-lambda);
  for (int k = 1; k <= kmax; ++k) p[k] = p[k - 1] * lambda / k;
  return p;
}

/// E[min(X, cap)] and Var[min(X, cap)] for X ~ Poisson(lambda).
struct Moments {
  double mean;
  double variance;
};

inline Moments clipped_poisson_moments(double lambda, int cap) {
  const auto p = poisson_pmf(lambda, 200);
  double m1 = 0.0, m2 = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double v = std::min(k, cap);
    m1 += v * p[k];
    m2 += v * v * p[k];
  }
  return {m1, m2 - m1 * m1};
}

/// Exact variance of the binomial Anscombe transform of S ~ Bin(n, p).
inline double anscombe_binomial_variance(int n, double p) {
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
  for (int s = 0; s <= n; ++s) {
    pmf[s] = std::exp(std::lgamma(n + 1.0) - std::lgamma(s + 1.0) - std::lgamma(n - s + 1.0) +
                      s * std::log(p) + (n - s) * std::log1p(-p));
  }
  double m1 = 0.0, m2 = 0.0;
  for (int s = 0; s <= n; ++s) {
    const double z = 2.0 * std::sqrt(n + 0.5) * std::asin(std::sqrt((s + 0.375) / (n + 0.75)));
    m1 += z * pmf[s];
    m2 += z * z * pmf[s];
  }
  return m2 - m1 * m1;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("qis_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace qis::testing
