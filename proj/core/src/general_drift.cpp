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

#include "pathvol/general_drift.hpp"

#include <cmath>

namespace pathvol::experimental {

double drift_general(double x, double y, double t, double alpha,
                     const LocalVol& sigma, const LocalVol& sigma_dx,
                     const ModelParams& params) {
  if (!(x > 0.0) || !(y > 0.0)) throw Error("prices must be > 0");
  if (!(t > alpha)) throw Error("drift is singular at t <= alpha");
  const double vol = sigma(t, x);
  if (!(vol > 0.0)) throw Error("local volatility must be > 0");
  const double s2 = params.sigma_bar * params.sigma_bar;
  const double elapsed = t - alpha;
  const double denom = 2.0 - 1.0 / (2.0 * s2 * elapsed);
  if (std::abs(denom) < 1e-12) throw Error("drift denominator singular");
  const double log_xy = std::log(x / y);
  const double ratio = params.mu / s2;
  const double dvar_dx = 2.0 * vol * sigma_dx(t, x);
  return 0.5 * dvar_dx +
         0.5 * vol * vol / x * (ratio - 1.5 - log_xy / (s2 * elapsed)) +
         x / (2.0 * elapsed) * (log_xy - (ratio - 0.5) / denom);
}

}  // namespace pathvol::experimental
