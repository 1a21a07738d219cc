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

// Test-only reference computations. Nothing here calls into the library code
// it is used to check.

#ifndef PATHVOL_TESTS_ORACLES_HPP_
#define PATHVOL_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace pathvol::testing {

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, std::size_t panels = 20000) {
  if (panels % 2 == 1) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double sum = f(a) + f(b);
  for (std::size_t i = 1; i < panels; ++i) {
    sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
  }
  return sum * h / 3.0;
}

/// e^{-rT} E[(s e^{(r - v^2/2)T + v sqrt(T) z} - K)^+] against the standard
/// normal density, integrated numerically over z in [-12, 12].
inline double quadrature_call_price(double s, double strike, double r,
                                    double vol, double T) {
  const double root = vol * std::sqrt(T);
  const double drift = (r - 0.5 * vol * vol) * T;
  // Start at the kink so the integrand is smooth on the domain.
  const double kink = (std::log(strike / s) - drift) / root;
  const double lo = std::max(-12.0, kink);
  if (lo >= 12.0) return 0.0;
  auto integrand = [&](double z) {
    const double payoff = std::max(s * std::exp(drift + root * z) - strike, 0.0);
    return payoff * std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  };
  return std::exp(-r * T) * simpson(integrand, lo, 12.0);
}

inline double central_difference(const std::function<double(double)>& f,
                                 double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double second_difference(const std::function<double(double)>& f,
                                double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

/// Least-squares slope of log(y) on log(x).
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace pathvol::testing

#endif  // PATHVOL_TESTS_ORACLES_HPP_
