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

#include "pathvol/yprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pathvol/stats.hpp"

namespace pathvol {
namespace {

// Constant part of drift_nu(y, ...) / y.
double drift_nu_level(const ModelParams& p) {
  const double nu2 = p.nu * p.nu;
  const double s2 = p.sigma_bar * p.sigma_bar;
  return 0.25 * (nu2 - s2) + 0.5 * p.mu * (nu2 / s2 + 1.0);
}

// Global sample times for a path made of identical blocks with the given
// block-relative times. Uniform sub-grids use k T / (N m) so that the times
// agree bit for bit with simulate_gbm.
std::vector<double> path_times(const ModelParams& p,
                               std::span<const double> local, bool uniform) {
  const std::size_t blocks = p.steps();
  const std::size_t m = local.size() - 1;
  std::vector<double> times(blocks * m + 1);
  const double total = static_cast<double>(blocks * m);
  for (std::size_t i = 0; i < blocks; ++i) {
    const double start = p.T * static_cast<double>(i) / static_cast<double>(blocks);
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t g = i * m + k;
      times[g] = uniform ? p.T * static_cast<double>(g) / total
                         : start + local[k];
    }
  }
  times.back() = p.T;
  return times;
}

template <typename Sampler>
Path simulate_blocks(const ModelParams& p, const Sampler& sampler,
                     bool uniform, RandomStream& stream) {
  std::vector<double> times = path_times(p, sampler.local_times(), uniform);
  std::vector<double> values(times.size());
  const std::size_t m = sampler.local_times().size() - 1;
  values[0] = p.s0;
  BlockState state{0, 0.0, p.s0};
  for (std::size_t i = 0; i < p.steps(); ++i) {
    state.index = i;
    state.start_time = times[i * m];
    const std::vector<double> block = sampler.sample(state, stream);
    std::copy(block.begin(), block.end(), values.begin() + i * m + 1);
    state.start_value = block.back();
  }
  return Path(std::move(times), std::move(values));
}

}  // namespace

KernelCovariance::KernelCovariance(double beta, double sigma_bar)
    : beta_(beta), sigma_bar_(sigma_bar) {
  if (!(sigma_bar > 0.0)) throw Error("sigma_bar must be > 0");
  if (!(beta < 1.0)) throw Error("beta must be < 1");
}

KernelCovariance::KernelCovariance(const ModelParams& params)
    : KernelCovariance(params.beta(), params.sigma_bar) {}

double KernelCovariance::operator()(double s, double t) const {
  if (s < 0.0 || t < 0.0) throw Error("kernel times must be >= 0");
  if (s > t) std::swap(s, t);
  if (s == 0.0) return 0.0;
  // s^{1 - beta/2} t^{beta/2}, never (t/s)^{beta/2} alone.
  return sigma_bar_ * sigma_bar_ * s * std::pow(s / t, -0.5 * beta_);
}

Eigen::MatrixXd KernelCovariance::matrix(std::span<const double> times) const {
  const auto n = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(times[i] > 0.0)) throw Error("kernel matrix needs times > 0");
    for (Eigen::Index j = 0; j <= i; ++j) {
      out(i, j) = out(j, i) = (*this)(times[j], times[i]);
    }
  }
  return out;
}

double drift_nu(double y, double y_alpha, double t, double alpha,
                const ModelParams& params) {
  if (!(y > 0.0) || !(y_alpha > 0.0)) throw Error("prices must be > 0");
  if (!(t > alpha)) throw Error("drift is singular at t <= alpha");
  const double level = y * drift_nu_level(params);
  if (y == y_alpha) return level;
  return level + y / (2.0 * (t - alpha)) * params.beta() * std::log(y / y_alpha);
}

EulerBlockSampler::EulerBlockSampler(const ModelParams& params,
                                     std::size_t sub_steps)
    : params_(validate(params)) {
  const double window = params_.epsilon / params_.delta;
  const double wanted = static_cast<double>(sub_steps) * window;
  if (wanted < 1.0 - 1e-9) {
    throw Error("sub_steps_per_block * epsilon / delta must be >= 1");
  }
  window_steps_ = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(wanted)));
  if (window_steps_ >= sub_steps) {
    throw Error("sub_steps_per_block leaves no Euler steps after epsilon");
  }
  uniform_ = std::abs(wanted - static_cast<double>(window_steps_)) < 1e-9;
  local_times_.resize(sub_steps + 1);
  const double eps = params_.epsilon;
  const double rest = sub_steps - window_steps_;
  for (std::size_t k = 0; k <= sub_steps; ++k) {
    if (uniform_) {
      local_times_[k] = params_.delta * static_cast<double>(k) /
                        static_cast<double>(sub_steps);
    } else if (k <= window_steps_) {
      local_times_[k] = eps * static_cast<double>(k) /
                        static_cast<double>(window_steps_);
    } else {
      local_times_[k] =
          eps + (params_.delta - eps) *
                    static_cast<double>(k - window_steps_) / rest;
    }
  }
  local_times_.back() = params_.delta;
}

std::vector<double> EulerBlockSampler::sample(const BlockState& state,
                                              RandomStream& stream) const {
  const ModelParams& p = params_;
  const double s2 = p.sigma_bar * p.sigma_bar;
  const double window_drift = p.mu - 0.5 * s2;
  const double level = drift_nu_level(p) - 0.5 * p.nu * p.nu;
  const double half_beta = 0.5 * p.beta();
  const double anchor = std::log(state.start_value);
  const std::size_t m = local_times_.size() - 1;
  std::vector<double> out(m);
  double rel = 0.0;  // ln(Y_t / Y_alpha)
  for (std::size_t k = 1; k <= m; ++k) {
    const double t0 = local_times_[k - 1];
    const double h = local_times_[k] - t0;
    const double z = stream.normal();
    if (k <= window_steps_) {
      rel += window_drift * h + p.sigma_bar * std::sqrt(h) * z;
    } else {
      rel += (level + half_beta * rel / t0) * h + p.nu * std::sqrt(h) * z;
    }
    out[k - 1] = std::exp(anchor + rel);
    if (!std::isfinite(out[k - 1]) || !(out[k - 1] > 0.0)) {
      throw Error("euler step produced a non-finite value in block " +
                  std::to_string(state.index) + " step " + std::to_string(k));
    }
  }
  return out;
}

ExactBlockSampler::ExactBlockSampler(const ModelParams& params,
                                     std::size_t sub_steps,
                                     Factorization factorization)
    : params_(validate(params)), factorization_(factorization) {
  if (sub_steps < 1) throw Error("sub_steps_per_block must be >= 1");
  local_times_.resize(sub_steps + 1);
  for (std::size_t k = 0; k <= sub_steps; ++k) {
    local_times_[k] = params_.delta * static_cast<double>(k) /
                      static_cast<double>(sub_steps);
  }
  local_times_.back() = params_.delta;
  const double beta = params_.beta();
  const double s2 = params_.sigma_bar * params_.sigma_bar;
  if (factorization_ == Factorization::kStructured) {
    carry_.assign(sub_steps + 1, 0.0);
    scale_.assign(sub_steps + 1, 0.0);
    scale_[1] = std::sqrt(s2 * local_times_[1]);
    for (std::size_t k = 2; k <= sub_steps; ++k) {
      const double ratio = local_times_[k - 1] / local_times_[k];
      const double log_ratio = std::log(ratio);
      carry_[k] = std::exp(-0.5 * beta * log_ratio);
      // 1 - ratio^{1 - beta}, accurate when the ratio is close to 1.
      const double gap = -std::expm1((1.0 - beta) * log_ratio);
      scale_[k] = std::sqrt(s2 * local_times_[k] * gap);
    }
  } else {
    const KernelCovariance kernel(params_);
    const std::span<const double> positive(local_times_.data() + 1, sub_steps);
    JitterPolicy policy;
    policy.initial = 1e-12 * s2 * params_.T;
    CholeskyResult chol = cholesky(kernel.matrix(positive), policy);
    dense_ = std::move(chol.lower);
    jitter_ = chol.jitter;
  }
}

Eigen::MatrixXd ExactBlockSampler::factor() const {
  if (factorization_ == Factorization::kDense) return dense_;
  const auto m = static_cast<Eigen::Index>(local_times_.size() - 1);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    out(k, k) = scale_[k + 1];
    for (Eigen::Index j = 0; j < k; ++j) out(k, j) = carry_[k + 1] * out(k - 1, j);
  }
  return out;
}

std::vector<double> ExactBlockSampler::sample(const BlockState& state,
                                              RandomStream& stream) const {
  const ModelParams& p = params_;
  const double drift = p.mu - 0.5 * p.sigma_bar * p.sigma_bar;
  const double anchor = std::log(state.start_value);
  const std::size_t m = local_times_.size() - 1;
  std::vector<double> out(m);
  if (factorization_ == Factorization::kStructured) {
    double x = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
      x = carry_[k] * x + scale_[k] * stream.normal();
      out[k - 1] = std::exp(anchor + drift * local_times_[k] + x);
    }
  } else {
    Eigen::VectorXd z(static_cast<Eigen::Index>(m));
    for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = stream.normal();
    const Eigen::VectorXd x = dense_.triangularView<Eigen::Lower>() * z;
    for (std::size_t k = 1; k <= m; ++k) {
      out[k - 1] = std::exp(anchor + drift * local_times_[k] +
                            x(static_cast<Eigen::Index>(k - 1)));
    }
  }
  return out;
}

Path simulate_y_euler(const ModelParams& params, std::size_t sub_steps_per_block,
                      RandomStream& stream) {
  const ModelParams p = validate(params);
  const EulerBlockSampler sampler(p, sub_steps_per_block);
  return simulate_blocks(p, sampler, sampler.uniform(), stream);
}

Path simulate_y_euler(const ModelParams& params, std::size_t sub_steps_per_block,
                      std::uint64_t seed, std::uint64_t path_index) {
  RandomStream stream(seed, stream_id(path_index));
  return simulate_y_euler(params, sub_steps_per_block, stream);
}

Path simulate_y_exact(const ModelParams& params, std::size_t sub_steps_per_block,
                      RandomStream& stream, Factorization factorization) {
  const ModelParams p = validate(params);
  const ExactBlockSampler sampler(p, sub_steps_per_block, factorization);
  return simulate_blocks(p, sampler, true, stream);
}

Path simulate_y_exact(const ModelParams& params, std::size_t sub_steps_per_block,
                      std::uint64_t seed, std::uint64_t path_index,
                      Factorization factorization) {
  RandomStream stream(seed, stream_id(path_index));
  return simulate_y_exact(params, sub_steps_per_block, stream, factorization);
}

YSimulator::YSimulator(const ModelParams& params, YScheme scheme,
                       std::size_t sub_steps, Factorization factorization)
    : params_(validate(params)), scheme_(scheme) {
  if (scheme_ == YScheme::kEuler) {
    euler_.emplace(params_, sub_steps);
  } else {
    exact_.emplace(params_, sub_steps, factorization);
  }
}

Path YSimulator::operator()(RandomStream& stream) const {
  if (scheme_ == YScheme::kEuler) {
    return simulate_blocks(params_, *euler_, euler_->uniform(), stream);
  }
  return simulate_blocks(params_, *exact_, true, stream);
}

GbmDynamics qmeasure_dynamics_y(const ModelParams& params) {
  return {params.r, params.nu};
}

GbmDynamics qmeasure_dynamics_s(const ModelParams& params) {
  return {params.r, params.sigma_bar};
}

}  // namespace pathvol
