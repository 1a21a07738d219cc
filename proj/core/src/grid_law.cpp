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

#include "pathvol/grid_law.hpp"

#include <cmath>

#include "pathvol/gbm.hpp"
#include "pathvol/parallel.hpp"

namespace pathvol {
namespace {

constexpr std::size_t kMinPaths = 1000;

std::size_t default_sub_steps(YScheme scheme) {
  return scheme == YScheme::kExact ? 1 : 200;
}

void grid_log_returns(const Path& path, std::span<const double> grid,
                      double* out) {
  const std::vector<double> v = path.sample(grid);
  for (std::size_t i = 1; i < v.size(); ++i) out[i - 1] = std::log(v[i] / v[i - 1]);
}

}  // namespace

std::size_t GridLawReport::ks_failures() const {
  std::size_t n = 0;
  for (const auto& inc : increments) n += inc.ks.passed() ? 0 : 1;
  return n;
}

bool GridLawReport::autocorr_pass() const {
  return std::abs(lag1_autocorr) <= autocorr_bound;
}

bool GridLawReport::passed() const {
  return increments_pass() && two_sample_pass() && autocorr_pass();
}

GridReturns simulate_grid_returns(const ModelParams& params,
                                  const YPathSource& y_source,
                                  std::size_t n_paths, std::uint64_t seed,
                                  unsigned threads) {
  const ModelParams p = validate(params);
  const TradingGrid grid(p);
  GridReturns out;
  out.paths = n_paths;
  out.increments = p.steps();
  out.y.resize(n_paths * out.increments);
  out.s.resize(n_paths * out.increments);
  parallel_for(n_paths, threads, [&](std::size_t i) {
    RandomStream ys(seed, stream_id(i, StreamPurpose::kPrimary));
    RandomStream ss(seed, stream_id(i, StreamPurpose::kReference));
    const Path y = y_source(ys);
    const Path s = simulate_gbm(p, p.mu, p.sigma_bar, 1, ss);
    grid_log_returns(y, grid.times(), out.y.data() + i * out.increments);
    grid_log_returns(s, grid.times(), out.s.data() + i * out.increments);
  });
  return out;
}

GridLawReport analyze_grid_returns(const ModelParams& params,
                                   const GridReturns& returns,
                                   const GridLawOptions& options) {
  if (returns.paths < kMinPaths) {
    throw Error("grid law report needs at least 1000 paths");
  }
  GridLawReport report;
  report.paths = returns.paths;
  report.level = options.level;
  report.flake_budget = options.flake_budget;
  const double n = static_cast<double>(returns.paths);
  std::vector<double> column(returns.paths);
  for (std::size_t i = 0; i < returns.increments; ++i) {
    for (std::size_t p = 0; p < returns.paths; ++p) column[p] = returns.y_at(p, i);
    const MarginalLaw law = grid_log_return_law(params, i + 1, i);
    IncrementCheck check;
    check.index = i;
    check.ks = ks_one_sample(column, law, options.level);
    const Moments m = moments(column);
    check.mean = m.mean;
    check.expected_mean = law.mean_log;
    check.mean_z = (m.mean - law.mean_log) / std::sqrt(law.var_log / n);
    check.variance = m.variance;
    check.expected_variance = law.var_log;
    check.variance_rel_error = m.variance / law.var_log - 1.0;
    check.moments_ok = std::abs(check.mean_z) < 4.0 &&
                       std::abs(check.variance_rel_error) <
                           4.0 * std::sqrt(2.0 / (n - 1.0));
    report.increments.push_back(check);
  }
  report.two_sample = ks_two_sample(returns.y, returns.s, options.level);

  // Lag-1 autocorrelation pooled over within-path pairs.
  double mean = 0.0;
  for (double r : returns.y) mean += r;
  mean /= static_cast<double>(returns.y.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t p = 0; p < returns.paths; ++p) {
    for (std::size_t i = 0; i < returns.increments; ++i) {
      const double a = returns.y_at(p, i) - mean;
      den += a * a;
      if (i + 1 < returns.increments) num += a * (returns.y_at(p, i + 1) - mean);
    }
  }
  const double pairs = static_cast<double>(returns.paths * (returns.increments - 1));
  const double total = static_cast<double>(returns.y.size());
  report.lag1_autocorr = den > 0.0 ? (num / pairs) / (den / total) : 0.0;
  report.autocorr_bound = 3.0 / std::sqrt(n);
  return report;
}

GridLawReport grid_law_report(const ModelParams& params, std::size_t n_paths,
                              const YPathSource& y_source, std::uint64_t seed,
                              const GridLawOptions& options) {
  if (n_paths < kMinPaths) {
    throw Error("grid law report needs at least 1000 paths");
  }
  const GridReturns returns =
      simulate_grid_returns(params, y_source, n_paths, seed, options.threads);
  return analyze_grid_returns(validate(params), returns, options);
}

GridLawReport grid_law_report(const ModelParams& params, std::size_t n_paths,
                              YScheme scheme, std::uint64_t seed,
                              const GridLawOptions& options) {
  const std::size_t sub =
      options.sub_steps == 0 ? default_sub_steps(scheme) : options.sub_steps;
  const YSimulator sim(params, scheme, sub);
  return grid_law_report(
      params, n_paths, [&sim](RandomStream& s) { return sim(s); }, seed,
      options);
}

}  // namespace pathvol
