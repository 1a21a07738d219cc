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

#include "pathvol/hedging.hpp"

#include <algorithm>
#include <cmath>

#include "pathvol/parallel.hpp"

namespace pathvol {
namespace {

double payoff(const OptionSpec& opt, double s) {
  return opt.kind == OptionKind::kCall ? std::max(s - opt.strike, 0.0)
                                       : std::max(opt.strike - s, 0.0);
}

}  // namespace

void validate(const HedgeConfig& cfg) {
  if (!(cfg.hedge_vol > 0.0)) throw Error("hedge_vol must be > 0");
  if (cfg.rebalance_count < 1) throw Error("rebalance_count must be >= 1");
  if (!(cfg.option.expiry > 0.0)) throw Error("option expiry must be > 0");
  validate(cfg.option);
}

double hedge_residual(const Path& path, const HedgeConfig& cfg,
                      HedgeTrace* trace) {
  validate(cfg);
  const OptionSpec& opt = cfg.option;
  const std::size_t n = cfg.rebalance_count;
  const std::vector<double> grid = uniform_partition(opt.expiry, n);
  const std::vector<double> spot = path.sample(grid);
  if (std::abs(path.time(0)) > 1e-12) throw Error("path must start at t = 0");

  double value = bs_price(spot[0], opt, cfg.rate, cfg.hedge_vol);
  double shares = 0.0;
  double cash = value;
  if (trace != nullptr) *trace = {};
  for (std::size_t k = 0; k < n; ++k) {
    const double tau = opt.expiry - grid[k];
    const double pre = shares * spot[k] + cash;
    shares = bs_delta(spot[k], opt.with_expiry(tau), cfg.rate, cfg.hedge_vol);
    cash = pre - shares * spot[k];
    if (trace != nullptr) {
      trace->times.push_back(grid[k]);
      trace->pre_trade.push_back(pre);
      trace->post_trade.push_back(shares * spot[k] + cash);
    }
    cash *= std::exp(cfg.rate * (grid[k + 1] - grid[k]));
  }
  return shares * spot[n] + cash - payoff(opt, spot[n]);
}

HedgeReport summarize(std::vector<double> residuals, const HedgeConfig& cfg) {
  HedgeReport out;
  out.rebalance_count = cfg.rebalance_count;
  out.hedge_vol = cfg.hedge_vol;
  const double n = static_cast<double>(residuals.size());
  if (residuals.empty()) throw Error("hedge report needs at least one path");
  double sum = 0.0;
  double sq = 0.0;
  for (double r : residuals) {
    sum += r;
    sq += r * r;
  }
  out.mean = sum / n;
  out.rms = std::sqrt(sq / n);
  if (residuals.size() > 1) {
    double var = 0.0;
    for (double r : residuals) var += (r - out.mean) * (r - out.mean);
    var /= (n - 1.0);
    out.standard_error = std::sqrt(var / n);
  }
  out.residuals = std::move(residuals);
  return out;
}

HedgeReport hedge_backtest(std::span<const Path> paths, const HedgeConfig& cfg,
                           unsigned threads) {
  validate(cfg);
  std::vector<double> residuals(paths.size());
  parallel_for(paths.size(), threads, [&](std::size_t i) {
    residuals[i] = hedge_residual(paths[i], cfg);
  });
  return summarize(std::move(residuals), cfg);
}

double pathwise_replication_residual(const LiftedPath& lp,
                                     const HedgeConfig& cfg,
                                     IntegralKind kind) {
  validate(cfg);
  const OptionSpec& opt = cfg.option;
  const auto t = lp.coarse_times();
  const auto s = lp.values();
  const double tol = 1e-9 * std::max(1.0, opt.expiry);
  if (lp.intervals() != cfg.rebalance_count || std::abs(t.front()) > tol ||
      std::abs(t.back() - opt.expiry) > tol) {
    throw Error("lift partition must be the rebalance grid");
  }
  double value = bs_price(s[0], opt, cfg.rate, cfg.hedge_vol);
  for (std::size_t k = 0; k < lp.intervals(); ++k) {
    const OptionSpec live = opt.with_expiry(opt.expiry - t[k]);
    const double delta = bs_delta(s[k], live, cfg.rate, cfg.hedge_vol);
    const double cash = value - delta * s[k];
    double gain = delta * lp.increment(k);
    if (kind == IntegralKind::kCompensated) {
      gain += bs_gamma(s[k], live, cfg.rate, cfg.hedge_vol) * lp.lift()[k];
    }
    if (!std::isfinite(gain)) throw Error("non-finite hedge gain");
    value += gain + cash * std::expm1(cfg.rate * (t[k + 1] - t[k]));
  }
  return value - payoff(opt, s.back());
}

}  // namespace pathvol
