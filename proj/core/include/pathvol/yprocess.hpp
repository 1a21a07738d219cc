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

// The grid-indistinguishable price process Y.
//
// Y has diffusion coefficient nu * Y but, on every trading-grid step, the
// same log-return law as BSM(mu, sigma_bar). Inside block [i delta,
// (i+1) delta) the drift is anchored at the block-start value and carries a
// 1 / (t - i delta) correction; the block law depends on the past only
// through that anchor.
//
// Two independent schemes are provided:
//   * Euler: GBM(mu, sigma_bar) on the first epsilon of each block, then
//     Euler-Maruyama on ln Y with the anchored drift.
//   * Exact: Z = ln Y minus its mean is the Gaussian process
//     nu * int_0^t (t/u)^{beta/2} dW_u (block-relative time) whose
//     covariance is c(s, t) = sigma_bar^2 s^{1 - beta/2} t^{beta/2}, s <= t.
//     Sampled through a Cholesky factor of c on the sub-grid.

#ifndef PATHVOL_YPROCESS_HPP_
#define PATHVOL_YPROCESS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pathvol/core.hpp"
#include "pathvol/random.hpp"

namespace pathvol {

/// Everything a block needs from the past: where it starts and the anchor
/// value of the drift.
struct BlockState {
  std::size_t index = 0;
  double start_time = 0.0;
  double start_value = 0.0;
};

/// Covariance of nu * int_0^t (t/u)^{beta/2} dW_u in block-relative time.
class KernelCovariance {
 public:
  KernelCovariance(double beta, double sigma_bar);
  explicit KernelCovariance(const ModelParams& params);

  double beta() const { return beta_; }
  double sigma_bar() const { return sigma_bar_; }

  /// c(s, t), symmetric, c(0, t) = 0, c(t, t) = sigma_bar^2 t.
  double operator()(double s, double t) const;

  /// Matrix [c(t_i, t_j)] over strictly positive times.
  Eigen::MatrixXd matrix(std::span<const double> times) const;

 private:
  double beta_;
  double sigma_bar_;
};

/// Drift u^nu(y, y_alpha, t, alpha) of Y for sigma(y) = nu y:
///   y [ (nu^2 - sigma_bar^2)/4 + (mu/2)(nu^2/sigma_bar^2 + 1) ]
///   + y / (2 (t - alpha)) (1 - nu^2/sigma_bar^2) ln(y / y_alpha).
/// Throws for t <= alpha. On the anchor (y == y_alpha) the log term is
/// skipped, so the value stays finite as t approaches alpha.
double drift_nu(double y, double y_alpha, double t, double alpha,
                const ModelParams& params);

enum class YScheme { kEuler, kExact };

enum class Factorization {
  kStructured,  // closed-form factor of the semi-separable kernel, O(n)
  kDense,       // Eigen Cholesky of the full kernel matrix, O(n^3) setup
};

/// Samples one block of the Euler scheme. Local times are block-relative.
class EulerBlockSampler {
 public:
  EulerBlockSampler(const ModelParams& params, std::size_t sub_steps);

  /// Block-relative times 0 = t_0 < ... < t_m = delta.
  std::span<const double> local_times() const { return local_times_; }
  /// Number of steps inside the epsilon regularization window.
  std::size_t window_steps() const { return window_steps_; }
  bool uniform() const { return uniform_; }

  /// Values at local_times()[1..m], given the block-start state.
  /// Consumes exactly m normal draws from `stream`.
  std::vector<double> sample(const BlockState& state,
                             RandomStream& stream) const;

 private:
  ModelParams params_;
  std::vector<double> local_times_;
  std::size_t window_steps_ = 0;
  bool uniform_ = true;
};

/// Samples one block of the exact Gaussian scheme.
class ExactBlockSampler {
 public:
  ExactBlockSampler(const ModelParams& params, std::size_t sub_steps,
                    Factorization factorization = Factorization::kStructured);

  std::span<const double> local_times() const { return local_times_; }
  Factorization factorization() const { return factorization_; }
  /// Diagonal jitter used by the dense factorization (0 otherwise).
  double jitter() const { return jitter_; }

  /// Lower-triangular factor L of the kernel on local_times()[1..m]; for the
  /// structured path it is expanded from the recursion coefficients.
  Eigen::MatrixXd factor() const;

  std::vector<double> sample(const BlockState& state,
                             RandomStream& stream) const;

 private:
  ModelParams params_;
  Factorization factorization_;
  std::vector<double> local_times_;
  // Structured: X_k = carry_k X_{k-1} + scale_k Z_k.
  std::vector<double> carry_;
  std::vector<double> scale_;
  Eigen::MatrixXd dense_;
  double jitter_ = 0.0;
};

Path simulate_y_euler(const ModelParams& params, std::size_t sub_steps_per_block,
                      RandomStream& stream);
Path simulate_y_euler(const ModelParams& params, std::size_t sub_steps_per_block,
                      std::uint64_t seed, std::uint64_t path_index = 0);

Path simulate_y_exact(const ModelParams& params, std::size_t sub_steps_per_block,
                      RandomStream& stream,
                      Factorization factorization = Factorization::kStructured);
Path simulate_y_exact(const ModelParams& params, std::size_t sub_steps_per_block,
                      std::uint64_t seed, std::uint64_t path_index = 0,
                      Factorization factorization = Factorization::kStructured);

/// Reusable simulator for many paths with the same parameters; the block
/// factor is computed once.
class YSimulator {
 public:
  YSimulator(const ModelParams& params, YScheme scheme, std::size_t sub_steps,
             Factorization factorization = Factorization::kStructured);

  Path operator()(RandomStream& stream) const;
  YScheme scheme() const { return scheme_; }

 private:
  ModelParams params_;
  YScheme scheme_;
  std::optional<EulerBlockSampler> euler_;
  std::optional<ExactBlockSampler> exact_;
};

/// Pricing-measure dynamics dX = drift X dt + vol X dW^Q.
struct GbmDynamics {
  double drift = 0.0;
  double vol = 0.0;
};

/// Y under Q: drift r, vol nu.
GbmDynamics qmeasure_dynamics_y(const ModelParams& params);
/// S under Q: drift r, vol sigma_bar.
GbmDynamics qmeasure_dynamics_s(const ModelParams& params);

}  // namespace pathvol

#endif  // PATHVOL_YPROCESS_HPP_
