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

// Self-financing delta hedging of a European option.
//
// The hedger sells the option at V0 = bs_price(hedge_vol), holds
// bs_delta(hedge_vol) shares at each rebalance time k T / n (k < n) and
// keeps the rest in a bank account growing by e^{r step}. The residual is
// terminal portfolio value minus payoff: positive means hedger surplus.

#ifndef PATHVOL_HEDGING_HPP_
#define PATHVOL_HEDGING_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "pathvol/core.hpp"
#include "pathvol/gbm.hpp"
#include "pathvol/pathwise.hpp"

namespace pathvol {

struct HedgeConfig {
  double hedge_vol = 0.2;
  std::size_t rebalance_count = 64;
  OptionSpec option;
  double rate = 0.05;
};

void validate(const HedgeConfig& cfg);

struct HedgeReport {
  std::vector<double> residuals;
  double mean = 0.0;
  double standard_error = 0.0;
  /// sqrt(mean of squared residuals); rms^2 = mean^2 + (biased) variance.
  double rms = 0.0;
  std::size_t rebalance_count = 0;
  double hedge_vol = 0.0;

  std::size_t path_count() const { return residuals.size(); }
};

/// Pre- and post-trade portfolio values at every rebalance of one path.
struct HedgeTrace {
  std::vector<double> times;
  std::vector<double> pre_trade;
  std::vector<double> post_trade;
};

/// Residual of hedging a single path. Every rebalance time must be a
/// sample time of `path`.
double hedge_residual(const Path& path, const HedgeConfig& cfg,
                      HedgeTrace* trace = nullptr);

/// Hedges every path with the same configuration.
HedgeReport hedge_backtest(std::span<const Path> paths, const HedgeConfig& cfg,
                           unsigned threads = 1);

/// Summary statistics over precomputed residuals.
HedgeReport summarize(std::vector<double> residuals, const HedgeConfig& cfg);

enum class IntegralKind { kCompensated, kUncompensated };

/// The replication identity evaluated with pathwise sums on the lift's
/// partition:
///   V0 + sum (Delta S_{u,t} + Gamma SS_{u,t}) + cash accrual - payoff.
/// The partition must be the rebalance grid of `cfg`.
double pathwise_replication_residual(
    const LiftedPath& lp, const HedgeConfig& cfg,
    IntegralKind kind = IntegralKind::kCompensated);

}  // namespace pathvol

#endif  // PATHVOL_HEDGING_HPP_
