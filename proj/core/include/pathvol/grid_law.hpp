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

// Executable check that Y and BSM(mu, sigma_bar) cannot be told apart on
// the trading grid.
//
// Only one-step increment margins and lag-1 dependence are tested; the full
// finite-dimensional grid law is not.

#ifndef PATHVOL_GRID_LAW_HPP_
#define PATHVOL_GRID_LAW_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "pathvol/core.hpp"
#include "pathvol/random.hpp"
#include "pathvol/stats.hpp"
#include "pathvol/yprocess.hpp"

namespace pathvol {

struct GridLawOptions {
  double level = 0.01;
  /// Per-increment KS failures tolerated before the report fails.
  std::size_t flake_budget = 1;
  /// Sub-steps per block for Y; 0 picks 1 (exact) or 200 (Euler).
  std::size_t sub_steps = 0;
  unsigned threads = 1;
};

/// Grid log-returns, row-major [path][increment].
struct GridReturns {
  std::size_t paths = 0;
  std::size_t increments = 0;
  std::vector<double> y;
  std::vector<double> s;

  double y_at(std::size_t path, std::size_t i) const {
    return y[path * increments + i];
  }
  double s_at(std::size_t path, std::size_t i) const {
    return s[path * increments + i];
  }
};

struct IncrementCheck {
  std::size_t index = 0;  // return over [index delta, (index+1) delta]
  KsResult ks;
  double mean = 0.0;
  double expected_mean = 0.0;
  double mean_z = 0.0;  // (mean - expected) / (sd / sqrt(n))
  double variance = 0.0;
  double expected_variance = 0.0;
  double variance_rel_error = 0.0;
  bool moments_ok = false;  // |mean_z| < 4 and variance within 4 sd
};

struct GridLawReport {
  std::size_t paths = 0;
  double level = 0.0;
  std::size_t flake_budget = 0;
  std::vector<IncrementCheck> increments;
  KsResult two_sample;  // pooled Y returns vs pooled S returns
  double lag1_autocorr = 0.0;
  double autocorr_bound = 0.0;  // 3 / sqrt(paths)

  std::size_t ks_failures() const;
  bool increments_pass() const { return ks_failures() <= flake_budget; }
  bool two_sample_pass() const { return two_sample.passed(); }
  bool autocorr_pass() const;
  bool passed() const;
};

/// Y simulator under test; receives the per-path stream.
using YPathSource = std::function<Path(RandomStream&)>;

/// Simulates n_paths of Y (stream purpose kPrimary) and of
/// BSM(mu, sigma_bar) (purpose kReference) and extracts grid returns.
GridReturns simulate_grid_returns(const ModelParams& params,
                                  const YPathSource& y_source,
                                  std::size_t n_paths, std::uint64_t seed,
                                  unsigned threads = 1);

GridLawReport analyze_grid_returns(const ModelParams& params,
                                   const GridReturns& returns,
                                   const GridLawOptions& options = {});

GridLawReport grid_law_report(const ModelParams& params, std::size_t n_paths,
                              YScheme scheme, std::uint64_t seed,
                              const GridLawOptions& options = {});

GridLawReport grid_law_report(const ModelParams& params, std::size_t n_paths,
                              const YPathSource& y_source, std::uint64_t seed,
                              const GridLawOptions& options = {});

}  // namespace pathvol

#endif  // PATHVOL_GRID_LAW_HPP_
