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

#include "pathvol/gbm.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pathvol/stats.hpp"

namespace pathvol {
namespace {

constexpr double kVolLow = 1e-9;
constexpr double kVolHigh = 10.0;
constexpr int kMaxBisection = 200;

struct D12 {
  double d1;
  double d2;
};

D12 d12(double s, const OptionSpec& opt, double r, double vol) {
  const double sqrt_t = std::sqrt(opt.expiry);
  const double d1 =
      (std::log(s / opt.strike) + (r + 0.5 * vol * vol) * opt.expiry) /
      (vol * sqrt_t);
  return {d1, d1 - vol * sqrt_t};
}

double call_price(double s, const OptionSpec& opt, double r, double vol) {
  const double df = std::exp(-r * opt.expiry);
  if (opt.strike == 0.0) return s;
  if (vol == 0.0 || opt.expiry == 0.0) {
    return std::max(s - opt.strike * df, 0.0);
  }
  const auto [d1, d2] = d12(s, opt, r, vol);
  return s * normal_cdf(d1) - opt.strike * df * normal_cdf(d2);
}

}  // namespace

void validate(const OptionSpec& opt) {
  if (!(opt.strike >= 0.0) || !std::isfinite(opt.strike)) {
    throw Error("strike must be >= 0");
  }
  if (!(opt.expiry >= 0.0) || !std::isfinite(opt.expiry)) {
    throw Error("expiry must be >= 0");
  }
}

Path simulate_gbm(const ModelParams& params, double drift, double vol,
                  std::size_t sub_steps_per_block, RandomStream& stream) {
  const ModelParams p = validate(params);
  if (sub_steps_per_block < 1) throw Error("sub_steps_per_block must be >= 1");
  if (!(vol >= 0.0)) throw Error("vol must be >= 0");
  const std::size_t n = p.steps() * sub_steps_per_block;
  const double h = p.T / static_cast<double>(n);
  const double mean = (drift - 0.5 * vol * vol) * h;
  const double scale = vol * std::sqrt(h);
  std::vector<double> times(n + 1);
  std::vector<double> values(n + 1);
  double log_s = std::log(p.s0);
  times[0] = 0.0;
  values[0] = p.s0;
  for (std::size_t k = 1; k <= n; ++k) {
    log_s += mean + scale * stream.normal();
    times[k] = p.T * static_cast<double>(k) / static_cast<double>(n);
    values[k] = std::exp(log_s);
  }
  return Path(std::move(times), std::move(values));
}

Path simulate_gbm(const ModelParams& params, double drift, double vol,
                  std::size_t sub_steps_per_block, std::uint64_t seed,
                  std::uint64_t path_index) {
  RandomStream stream(seed, stream_id(path_index));
  return simulate_gbm(params, drift, vol, sub_steps_per_block, stream);
}

double sample_gbm_terminal(double s0, double drift, double vol, double T,
                           RandomStream& stream) {
  return s0 * std::exp((drift - 0.5 * vol * vol) * T +
                       vol * std::sqrt(T) * stream.normal());
}

double bs_price(double s, const OptionSpec& opt, double r, double vol) {
  validate(opt);
  if (!(s > 0.0)) throw Error("spot must be > 0");
  if (!(vol >= 0.0)) throw Error("vol must be >= 0");
  const double call = call_price(s, opt, r, vol);
  if (opt.kind == OptionKind::kCall) return call;
  return call - s + opt.strike * std::exp(-r * opt.expiry);
}

double bs_delta(double s, const OptionSpec& opt, double r, double vol) {
  validate(opt);
  if (!(s > 0.0)) throw Error("spot must be > 0");
  const double put_shift = opt.kind == OptionKind::kPut ? -1.0 : 0.0;
  if (opt.expiry == 0.0) {
    const double ind = s > opt.strike ? 1.0 : (s == opt.strike ? 0.5 : 0.0);
    return ind + put_shift;
  }
  if (!(vol > 0.0)) throw Error("delta needs vol > 0");
  if (opt.strike == 0.0) return 1.0 + put_shift;
  return normal_cdf(d12(s, opt, r, vol).d1) + put_shift;
}

double bs_gamma(double s, const OptionSpec& opt, double r, double vol) {
  validate(opt);
  if (!(s > 0.0)) throw Error("spot must be > 0");
  if (opt.expiry == 0.0) throw Error("gamma is undefined at expiry");
  if (!(vol > 0.0)) throw Error("gamma needs vol > 0");
  if (opt.strike == 0.0) return 0.0;
  const double d1 = d12(s, opt, r, vol).d1;
  return normal_pdf(d1) / (s * vol * std::sqrt(opt.expiry));
}

double bs_vega(double s, const OptionSpec& opt, double r, double vol) {
  validate(opt);
  if (opt.expiry == 0.0 || !(vol > 0.0) || opt.strike == 0.0) return 0.0;
  const double d1 = d12(s, opt, r, vol).d1;
  return s * normal_pdf(d1) * std::sqrt(opt.expiry);
}

PriceRange price_range(double s, const OptionSpec& opt, double r) {
  validate(opt);
  if (!(s > 0.0)) throw Error("spot must be > 0");
  const double df = std::exp(-r * opt.expiry);
  if (opt.kind == OptionKind::kCall) {
    return {std::max(s - opt.strike * df, 0.0), s};
  }
  return {std::max(opt.strike * df - s, 0.0), opt.strike * df};
}

double implied_vol(double price, double s, const OptionSpec& opt, double r) {
  const PriceRange range = price_range(s, opt, r);
  if (!(price > range.lower && price < range.upper)) {
    throw Error("no-arbitrage violation: price outside (" +
                std::to_string(range.lower) + ", " +
                std::to_string(range.upper) + ")");
  }
  if (opt.expiry == 0.0) throw Error("implied vol needs expiry > 0");
  double lo = kVolLow;
  double hi = kVolHigh;
  if (bs_price(s, opt, r, hi) < price) {
    throw Error("implied vol above the search bracket");
  }
  if (bs_price(s, opt, r, lo) > price) {
    throw Error("implied vol below the search bracket");
  }
  const double target = 1e-10 * s;
  double vol = 0.5 * (lo + hi);
  for (int it = 0; it < kMaxBisection; ++it) {
    vol = 0.5 * (lo + hi);
    const double diff = bs_price(s, opt, r, vol) - price;
    if (std::abs(diff) < 1e-3 * target || hi - lo < 1e-15) break;
    if (diff > 0.0) {
      hi = vol;
    } else {
      lo = vol;
    }
  }
  for (int it = 0; it < 8; ++it) {
    const double diff = bs_price(s, opt, r, vol) - price;
    const double vega = bs_vega(s, opt, r, vol);
    if (diff == 0.0 || !(vega > 0.0)) break;
    const double next = vol - diff / vega;
    if (!(next > lo * 0.5 && next < hi * 2.0)) break;
    if (std::abs(bs_price(s, opt, r, next) - price) >= std::abs(diff)) break;
    vol = next;
  }
  if (!(std::abs(bs_price(s, opt, r, vol) - price) < target)) {
    throw Error("implied vol did not converge");
  }
  return vol;
}

}  // namespace pathvol
