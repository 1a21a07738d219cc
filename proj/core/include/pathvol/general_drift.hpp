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

// Margin-matching drift for a general local volatility sigma_t(x), as
// originally printed. Only built with PATHVOL_ENABLE_GENERAL_DRIFT.
//
// This is NOT the production drift. With sigma(x) = nu x it does not reduce
// to drift_nu(): the last bracket differs from the Fokker-Planck solution
// x / (2 (t - alpha)) [ln(x/y) + (mu - sigma_bar^2/2)(t - alpha)], and paths
// driven by it fail the lognormal marginal check. It is kept verbatim so the
// discrepancy stays measurable.

#ifndef PATHVOL_GENERAL_DRIFT_HPP_
#define PATHVOL_GENERAL_DRIFT_HPP_

#include <functional>

#include "pathvol/core.hpp"

#ifndef PATHVOL_ENABLE_GENERAL_DRIFT
#error "general_drift.hpp requires PATHVOL_ENABLE_GENERAL_DRIFT"
#endif

namespace pathvol::experimental {

/// sigma_t(x) and its x-derivative.
using LocalVol = std::function<double(double t, double x)>;

/// u^sigma_t(x, y, alpha) =
///     1/2 d(sigma_t^2)/dx
///   + 1/2 sigma_t(x)^2 / x [mu/sigma_bar^2 - 3/2
///                           - ln(x/y) / (sigma_bar^2 (t - alpha))]
///   + x / (2 (t - alpha)) [ln(x/y) - (mu/sigma_bar^2 - 1/2)
///                                    / (2 - 1/(2 sigma_bar^2 (t - alpha)))]
///
/// Throws for t <= alpha and when the last denominator is within 1e-12 of 0.
double drift_general(double x, double y, double t, double alpha,
                     const LocalVol& sigma, const LocalVol& sigma_dx,
                     const ModelParams& params);

}  // namespace pathvol::experimental

#endif  // PATHVOL_GENERAL_DRIFT_HPP_
