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

// Black-Scholes-Merton: exact lognormal path simulation, closed-form call and
// put values, delta, gamma, implied volatility and the no-arbitrage range.

#ifndef PATHVOL_GBM_HPP_
#define PATHVOL_GBM_HPP_

#include <cstddef>
#include <cstdint>

#include "pathvol/core.hpp"
#include "pathvol/random.hpp"

namespace pathvol {

enum class OptionKind { kCall, kPut };

/// European option. `expiry` is the time to expiry seen from the pricing
/// date. A zero strike is accepted as the degenerate forward-like claim.
struct OptionSpec {
  double strike = 100.0;
  double expiry = 1.0;
  OptionKind kind = OptionKind::kCall;

  OptionSpec with_expiry(double tau) const {
    OptionSpec out = *this;
    out.expiry = tau;
    return out;
  }
};

void validate(const OptionSpec& opt);

/// No-arbitrage bounds for a call: [(s - K e^{-rT})^+, s].
struct PriceRange {
  double lower = 0.0;
  double upper = 0.0;
};

/// Lognormal stepping on the grid {k T / (N m)} with m = sub_steps_per_block:
/// ln S += (drift - vol^2/2) h + vol sqrt(h) Z, one normal draw per step.
Path simulate_gbm(const ModelParams& params, double drift, double vol,
                  std::size_t sub_steps_per_block, RandomStream& stream);
Path simulate_gbm(const ModelParams& params, double drift, double vol,
                  std::size_t sub_steps_per_block, std::uint64_t seed,
                  std::uint64_t path_index = 0);

/// Terminal value only; one draw. Same law as simulate_gbm(...).back().
double sample_gbm_terminal(double s0, double drift, double vol, double T,
                           RandomStream& stream);

/// Black-Scholes value. vol = 0 gives the discounted intrinsic value.
double bs_price(double s, const OptionSpec& opt, double r, double vol);

/// dV/ds. At expiry this is the exercise indicator, with s = K mapped to
/// 0.5 (minus 1 for puts).
double bs_delta(double s, const OptionSpec& opt, double r, double vol);

/// d^2V/ds^2. Undefined at expiry (throws).
double bs_gamma(double s, const OptionSpec& opt, double r, double vol);

/// dV/dvol.
double bs_vega(double s, const OptionSpec& opt, double r, double vol);

/// Bisection on [1e-9, 10] followed by a Newton polish. Throws Error with
/// "no-arbitrage violation" unless price lies strictly inside the bounds.
double implied_vol(double price, double s, const OptionSpec& opt, double r);

/// Bounds of the call price as vol runs over (0, inf).
PriceRange price_range(double s, const OptionSpec& opt, double r);

}  // namespace pathvol

#endif  // PATHVOL_GBM_HPP_
