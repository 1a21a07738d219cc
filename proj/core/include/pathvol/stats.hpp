// Copyright 2026 The pathvol Authors.
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

// Statistical toolkit: normal distribution, Kolmogorov-Smirnov tests,
// sample moments, autocorrelation and a jittered Cholesky factorization.

#ifndef PATHVOL_STATS_HPP_
#define PATHVOL_STATS_HPP_

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "pathvol/core.hpp"

namespace pathvol {

double normal_cdf(double x);
double normal_pdf(double x);
/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

/// Limiting distribution of sqrt(n) D_n:
/// P(K <= x) = 1 - 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
double kolmogorov_cdf(double x);
/// k such that P(K > k) = level; kolmogorov_critical_value(0.01) ~ 1.6276.
double kolmogorov_critical_value(double level);

/// Smallest sample accepted by the KS tests. Thresholds are asymptotic.
inline constexpr std::size_t kMinKsSamples = 100;

struct KsResult {
  double statistic = 0.0;
  double threshold = 0.0;
  double level = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;  // second sample size, 0 for one-sample tests

  bool passed() const { return statistic < threshold; }
};

/// sup |F_n - F| against N(law.mean_log, law.var_log). Threshold
/// k_level / sqrt(n). A zero variance law is treated as a point mass.
KsResult ks_one_sample(std::span<const double> samples, const MarginalLaw& law,
                       double level = 0.01);

/// Two-sample statistic, threshold k_level * sqrt((n + m) / (n m)).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b,
                       double level = 0.01);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  std::size_t n = 0;
};

/// Two-pass central moments. Needs at least two samples.
Moments moments(std::span<const double> samples);

/// Sample autocorrelation at `lag` (biased normalization, as in most
/// time-series texts). Returns 0 for a constant series.
double autocorr(std::span<const double> samples, std::size_t lag);

/// Diagonal jitter schedule: first try the matrix as is, then add
/// `initial`, then escalate by `factor` up to `max_escalations` times.
struct JitterPolicy {
  double initial = 1e-12;
  int max_escalations = 3;
  double factor = 10.0;
};

struct CholeskyResult {
  Eigen::MatrixXd lower;
  double jitter = 0.0;  // diagonal shift that was needed, 0 if none
};

/// Lower factor L with L L^T = matrix + jitter I. Throws Error when every
/// jitter level fails.
CholeskyResult cholesky(const Eigen::MatrixXd& matrix,
                        const JitterPolicy& policy = {});

}  // namespace pathvol

#endif  // PATHVOL_STATS_HPP_
