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

// Domain types shared by every module: model constants, the trading grid,
// sampled paths and lognormal transition laws. Time is in years and all
// rates are annualized.

#ifndef PATHVOL_CORE_HPP_
#define PATHVOL_CORE_HPP_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pathvol {

/// Raised for invalid inputs and numerical failures across the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model constants.
///
///   mu         drift of the statistical dynamics (1/year)
///   sigma_bar  historical volatility, governs grid log-return laws
///   nu         pathwise volatility, the diffusion coefficient of Y
///   r          risk-free rate
///   s0         initial price
///   T          horizon
///   delta      grid step; T / delta must be a whole number of steps
///   epsilon    regularization window at the start of each block
struct ModelParams {
  double mu = 0.1;
  double sigma_bar = 0.2;
  double nu = 0.4;
  double r = 0.05;
  double s0 = 100.0;
  double T = 1.0;
  double delta = 1.0 / 12.0;
  double epsilon = 1.0 / 120.0;

  /// 1 - nu^2 / sigma_bar^2. Negative when nu > sigma_bar.
  double beta() const;
  /// Number of grid steps N = T / delta.
  std::size_t steps() const;
};

/// Returns `params` with delta snapped so that T / delta is exactly integral.
/// Throws Error when any invariant fails.
ModelParams validate(const ModelParams& params);

/// Same as validate() after setting epsilon to delta / 10.
ModelParams with_default_epsilon(ModelParams params);

/// The equally spaced times {0, delta, ..., N delta}.
class TradingGrid {
 public:
  explicit TradingGrid(const ModelParams& params);

  std::size_t size() const { return times_.size(); }
  double step() const { return step_; }
  double operator[](std::size_t i) const { return times_[i]; }
  std::span<const double> times() const { return times_; }

  /// Start of the block containing t, i.e. i * delta for t in [i delta,
  /// (i+1) delta). The final time maps to the last block start.
  double block_start(double t) const;
  std::size_t block_index(double t) const;

 private:
  double step_;
  std::vector<double> times_;
};

/// One realization: strictly increasing times with strictly positive values.
class Path {
 public:
  Path(std::vector<double> times, std::vector<double> values);

  std::size_t size() const { return times_.size(); }
  std::span<const double> times() const { return times_; }
  std::span<const double> values() const { return values_; }
  double time(std::size_t i) const { return times_[i]; }
  double value(std::size_t i) const { return values_[i]; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }

  /// Index of the sample at time t (tolerance 1e-9 * max(1, t_end)).
  /// Throws Error when t is not a sample time.
  std::size_t index_of(double t) const;

  /// Values at the given times, each of which must be a sample time.
  std::vector<double> sample(std::span<const double> times) const;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Parameters of a Gaussian law for a log-price or log-return.
struct MarginalLaw {
  double mean_log = 0.0;
  double var_log = 0.0;
};

/// Law of ln(Y_{i delta} / Y_{j delta}) (identically ln S returns):
/// N((mu - sigma_bar^2/2)(i-j) delta, sigma_bar^2 (i-j) delta).
MarginalLaw grid_log_return_law(const ModelParams& params, std::size_t i,
                                std::size_t j);

/// Uniform partition {k T / n : k = 0..n}.
std::vector<double> uniform_partition(double T, std::size_t n);

/// Dyadic partition of [0, T] with 2^level intervals.
std::vector<double> dyadic_partition(double T, unsigned level);

}  // namespace pathvol

#endif  // PATHVOL_CORE_HPP_
