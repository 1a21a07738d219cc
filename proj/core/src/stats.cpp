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

#include "pathvol/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

namespace pathvol {

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error("normal_quantile needs 0 < p < 1");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double kolmogorov_cdf(double x) {
  if (x <= 0.0) return 0.0;
  // The alternating series converges fast for x > ~0.3; below that the
  // distribution is numerically 0.
  if (x < 0.2) return 0.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return 1.0 - 2.0 * sum;
}

double kolmogorov_critical_value(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error("test level must lie in (0, 1)");
  }
  double lo = 0.2;
  double hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (1.0 - kolmogorov_cdf(mid) > level) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

KsResult ks_one_sample(std::span<const double> samples, const MarginalLaw& law,
                       double level) {
  if (samples.size() < kMinKsSamples) {
    throw Error("KS test needs at least 100 samples");
  }
  if (law.var_log < 0.0) throw Error("law variance must be >= 0");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double sd = std::sqrt(law.var_log);
  // Compare both one-sided limits at each distinct sample value so that ties
  // and the point-mass law are handled exactly.
  auto cdf = [&](double x, bool left) {
    if (sd > 0.0) return normal_cdf((x - law.mean_log) / sd);
    return (left ? x > law.mean_log : x >= law.mean_log) ? 1.0 : 0.0;
  };
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(j) / n;
    d = std::max({d, std::abs(above - cdf(sorted[i], false)),
                  std::abs(below - cdf(sorted[i], true))});
    i = j;
  }
  KsResult out;
  out.statistic = d;
  out.level = level;
  out.n = sorted.size();
  out.threshold = kolmogorov_critical_value(level) / std::sqrt(n);
  return out;
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b,
                       double level) {
  if (a.size() < kMinKsSamples || b.size() < kMinKsSamples) {
    throw Error("KS test needs at least 100 samples");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n -
                             static_cast<double>(j) / m));
  }
  KsResult out;
  out.statistic = d;
  out.level = level;
  out.n = x.size();
  out.m = y.size();
  out.threshold =
      kolmogorov_critical_value(level) * std::sqrt((n + m) / (n * m));
  return out;
}

Moments moments(std::span<const double> samples) {
  if (samples.size() < 2) throw Error("moments need at least two samples");
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : samples) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  Moments out;
  out.n = samples.size();
  out.mean = mean;
  out.variance = m2 * n / (n - 1.0);
  if (m2 > 0.0) {
    out.skewness = m3 / std::pow(m2, 1.5);
    out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return out;
}

double autocorr(std::span<const double> samples, std::size_t lag) {
  if (lag >= samples.size()) throw Error("lag must be < sample count");
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  double denom = 0.0;
  for (double x : samples) denom += (x - mean) * (x - mean);
  if (denom == 0.0) return 0.0;
  double num = 0.0;
  for (std::size_t i = 0; i + lag < samples.size(); ++i) {
    num += (samples[i] - mean) * (samples[i + lag] - mean);
  }
  return num / denom;
}

CholeskyResult cholesky(const Eigen::MatrixXd& matrix,
                        const JitterPolicy& policy) {
  if (matrix.rows() != matrix.cols()) throw Error("cholesky needs a square matrix");
  double jitter = 0.0;
  for (int attempt = 0; attempt <= policy.max_escalations + 1; ++attempt) {
    if (attempt == 1) jitter = policy.initial;
    if (attempt > 1) jitter *= policy.factor;
    Eigen::MatrixXd shifted = matrix;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd lower = llt.matrixL();
      if (lower.allFinite()) return {std::move(lower), jitter};
    }
  }
  throw Error("cholesky failed after maximum jitter " + std::to_string(jitter));
}

}  // namespace pathvol
