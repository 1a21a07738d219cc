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

#include "pathvol/core.hpp"

#include <algorithm>
#include <cmath>

namespace pathvol {
namespace {

constexpr double kIntegralTolerance = 1e-9;

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

double ModelParams::beta() const {
  return 1.0 - (nu * nu) / (sigma_bar * sigma_bar);
}

std::size_t ModelParams::steps() const {
  return static_cast<std::size_t>(std::llround(T / delta));
}

ModelParams validate(const ModelParams& params) {
  if (!finite_positive(params.sigma_bar)) {
    throw Error("sigma_bar must be > 0");
  }
  if (!finite_positive(params.nu)) throw Error("nu must be > 0");
  if (!finite_positive(params.s0)) throw Error("s0 must be > 0");
  if (!finite_positive(params.T)) throw Error("T must be > 0");
  if (!std::isfinite(params.mu)) throw Error("mu must be finite");
  if (!std::isfinite(params.r)) throw Error("r must be finite");
  if (!finite_positive(params.delta) || params.delta > params.T) {
    throw Error("delta must satisfy 0 < delta <= T");
  }
  if (!finite_positive(params.epsilon)) throw Error("epsilon must be > 0");
  if (params.epsilon >= params.delta) {
    throw Error("epsilon must be < delta");
  }
  const double ratio = params.T / params.delta;
  const double whole = std::round(ratio);
  if (std::abs(ratio - whole) > kIntegralTolerance * std::max(1.0, ratio)) {
    throw Error("T / delta must be a whole number");
  }
  ModelParams out = params;
  out.delta = params.T / whole;
  return out;
}

ModelParams with_default_epsilon(ModelParams params) {
  params.epsilon = params.delta / 10.0;
  return validate(params);
}

TradingGrid::TradingGrid(const ModelParams& params) {
  const ModelParams p = validate(params);
  const std::size_t n = p.steps();
  step_ = p.delta;
  times_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    times_[i] = p.T * static_cast<double>(i) / static_cast<double>(n);
  }
  times_.back() = p.T;
}

std::size_t TradingGrid::block_index(double t) const {
  if (t < 0.0 || t > times_.back()) throw Error("time outside the grid");
  const std::size_t blocks = times_.size() - 1;
  auto i = static_cast<std::size_t>(std::floor(t / step_));
  // Guard against t = (i+1) delta landing one ulp below the boundary.
  if (i + 1 <= blocks && t >= times_[i + 1]) ++i;
  return std::min(i, blocks - 1);
}

double TradingGrid::block_start(double t) const {
  return times_[block_index(t)];
}

Path::Path(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size()) {
    throw Error("path times and values differ in length");
  }
  if (times_.size() < 2) throw Error("path needs at least two points");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) throw Error("path time is not finite");
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw Error("path times must be strictly increasing");
    }
    if (!finite_positive(values_[i])) {
      throw Error("path values must be finite and > 0");
    }
  }
}

std::size_t Path::index_of(double t) const {
  const double tol = 1e-9 * std::max(1.0, std::abs(times_.back()));
  auto it = std::lower_bound(times_.begin(), times_.end(), t - tol);
  if (it == times_.end() || std::abs(*it - t) > tol) {
    throw Error("time " + std::to_string(t) + " is not on the path grid");
  }
  return static_cast<std::size_t>(it - times_.begin());
}

std::vector<double> Path::sample(std::span<const double> times) const {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(values_[index_of(t)]);
  return out;
}

MarginalLaw grid_log_return_law(const ModelParams& params, std::size_t i,
                                std::size_t j) {
  if (j >= i || i > params.steps()) {
    throw Error("grid indices must satisfy 0 <= j < i <= N");
  }
  const double span = static_cast<double>(i - j) * params.delta;
  const double s2 = params.sigma_bar * params.sigma_bar;
  return {(params.mu - 0.5 * s2) * span, s2 * span};
}

std::vector<double> uniform_partition(double T, std::size_t n) {
  if (n == 0 || !(T > 0.0)) throw Error("partition needs n >= 1 and T > 0");
  std::vector<double> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    out[k] = T * static_cast<double>(k) / static_cast<double>(n);
  }
  out.back() = T;
  return out;
}

std::vector<double> dyadic_partition(double T, unsigned level) {
  return uniform_partition(T, std::size_t{1} << level);
}

}  // namespace pathvol
