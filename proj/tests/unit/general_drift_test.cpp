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

// The general drift is evaluated exactly as written. With sigma(x) = nu x it
// does not collapse to drift_nu; these tests pin down by how much, and show
// that a simulation driven by it misses the grid law.

#include "pathvol/general_drift.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "pathvol/random.hpp"
#include "pathvol/stats.hpp"
#include "pathvol/yprocess.hpp"

namespace pathvol::experimental {
namespace {

ModelParams base_params() { return validate(ModelParams{}); }

LocalVol linear_vol(double v) {
  return [v](double, double x) { return v * x; };
}
LocalVol constant_slope(double v) {
  return [v](double, double) { return v; };
}

double general(double x, double y, double t, double alpha, const ModelParams& p) {
  return drift_general(x, y, t, alpha, linear_vol(p.nu), constant_slope(p.nu), p);
}

// Same expression with the closing term replaced by
// x / (2 (t - a)) [ln(x/y) + (mu - sigma_bar^2 / 2)(t - a)].
double corrected(double x, double y, double t, double alpha, const ModelParams& p) {
  const double s2 = p.sigma_bar * p.sigma_bar;
  const double e = t - alpha;
  const double l = std::log(x / y);
  const double v2 = p.nu * p.nu;
  return v2 * x + 0.5 * v2 * x * (p.mu / s2 - 1.5 - l / (s2 * e)) +
         x / (2.0 * e) * (l + (p.mu - 0.5 * s2) * e);
}

TEST(DriftGeneralTest, SingularDenominator) {
  const ModelParams p = base_params();
  const double e = 1.0 / (4.0 * p.sigma_bar * p.sigma_bar);
  try {
    general(100.0, 100.0, e, 0.0, p);
    FAIL();
  } catch (const Error& err) {
    EXPECT_STREQ(err.what(), "drift denominator singular");
  }
  EXPECT_THROW(general(100.0, 100.0, 0.2, 0.2, p), Error);
}

TEST(DriftGeneralTest, AnchorValueIgnoresLogTerms) {
  const ModelParams p = base_params();
  const double s2 = p.sigma_bar * p.sigma_bar;
  const double v2 = p.nu * p.nu;
  for (double e : {0.01, 0.05, 0.5, 3.0}) {
    const double x = 100.0;
    const double denom = 2.0 - 1.0 / (2.0 * s2 * e);
    const double expected = v2 * x + 0.5 * v2 * x * (p.mu / s2 - 1.5) -
                            x / (2.0 * e) * (p.mu / s2 - 0.5) / denom;
    EXPECT_NEAR(general(x, x, 0.1 + e, 0.1, p), expected, 1e-10 * x);
  }
}

// Closing the last term as above recovers drift_nu everywhere.
TEST(DriftGeneralTest, CorrectedFormCollapsesToDriftNu) {
  const ModelParams p = base_params();
  for (double x : {80.0, 100.0, 130.0}) {
    for (double e : {0.01, 0.05, 0.08}) {
      EXPECT_NEAR(corrected(x, 100.0, 0.25 + e, 0.25, p),
                  drift_nu(x, 100.0, 0.25 + e, 0.25, p), 1e-10 * x);
    }
  }
}

// The shipped value differs from drift_nu by exactly the closing-term gap.
TEST(DriftGeneralTest, DiscrepancyWithDriftNuIsTheClosingTerm) {
  const ModelParams p = base_params();
  const double s2 = p.sigma_bar * p.sigma_bar;
  for (double x : {80.0, 100.0, 130.0}) {
    for (double e : {0.01, 0.05, 0.08}) {
      const double denom = 2.0 - 1.0 / (2.0 * s2 * e);
      const double gap = x / (2.0 * e) *
                         (-(p.mu / s2 - 0.5) / denom - (p.mu - 0.5 * s2) * e);
      const double got = general(x, 100.0, 0.25 + e, 0.25, p);
      const double canonical = drift_nu(x, 100.0, 0.25 + e, 0.25, p);
      EXPECT_NEAR(got - canonical, gap, 1e-10 * x);
      EXPECT_GT(std::abs(gap), 1e-3 * x);
    }
  }
}

// sigma(x) = sigma_bar x with x = y: the shipped formula tends to
// x (mu/2 + sigma_bar^2/4) for large t - a, where drift_nu gives mu x.
TEST(DriftGeneralTest, LargeElapsedTimeLimit) {
  ModelParams p = base_params();
  p.nu = p.sigma_bar;
  const double x = 100.0;
  const double got = general(x, x, 1e7, 0.0, p);
  const double limit = x * (0.5 * p.mu + 0.25 * p.sigma_bar * p.sigma_bar);
  EXPECT_NEAR(got, limit, 1e-6 * x);
  const double canonical = drift_nu(x, x, 1e7, 0.0, p);
  EXPECT_NEAR(canonical, p.mu * x, 1e-12 * x);
  ::testing::Test::RecordProperty("general_limit", std::to_string(got));
  ::testing::Test::RecordProperty("drift_nu_limit", std::to_string(canonical));
  EXPECT_GT(std::abs(got - canonical), 0.1 * x * p.mu);
}

using Drift = std::function<double(double x, double y, double t, double alpha)>;

// Log-Euler simulation of the block construction with an arbitrary drift and
// diffusion nu x; returns ln(Y_T / s0) per path.
std::vector<double> terminal_log_returns(const ModelParams& p, const Drift& drift,
                                         std::size_t paths) {
  constexpr std::size_t kSub = 40;
  const std::size_t window = 4;  // epsilon = delta / 10
  const double h = p.delta / kSub;
  const double s2 = p.sigma_bar * p.sigma_bar;
  std::vector<double> out(paths);
  for (std::size_t i = 0; i < paths; ++i) {
    RandomStream stream(61, stream_id(i, StreamPurpose::kAuxiliary));
    double log_y = std::log(p.s0);
    for (std::size_t block = 0; block < p.steps(); ++block) {
      const double alpha = static_cast<double>(block) * p.delta;
      const double anchor = std::exp(log_y);
      double rel = 0.0;
      for (std::size_t k = 0; k < kSub; ++k) {
        const double z = stream.normal();
        if (k < window) {
          rel += (p.mu - 0.5 * s2) * h + p.sigma_bar * std::sqrt(h) * z;
          continue;
        }
        const double t = alpha + static_cast<double>(k) * h;
        const double x = anchor * std::exp(rel);
        rel += (drift(x, anchor, t, alpha) / x - 0.5 * p.nu * p.nu) * h +
               p.nu * std::sqrt(h) * z;
      }
      log_y += rel;
    }
    out[i] = log_y - std::log(p.s0);
  }
  return out;
}

TEST(DriftGeneralTest, SimulationMissesTheGridLaw) {
  const ModelParams p = base_params();
  const MarginalLaw law = grid_log_return_law(p, p.steps(), 0);
  constexpr std::size_t kPaths = 20000;
  const auto control = terminal_log_returns(
      p,
      [&](double x, double y, double t, double a) { return drift_nu(x, y, t, a, p); },
      kPaths);
  const auto shipped = terminal_log_returns(
      p, [&](double x, double y, double t, double a) { return general(x, y, t, a, p); },
      kPaths);
  const KsResult ok = ks_one_sample(control, law);
  const KsResult bad = ks_one_sample(shipped, law);
  ::testing::Test::RecordProperty("control_ks", std::to_string(ok.statistic));
  ::testing::Test::RecordProperty("general_ks", std::to_string(bad.statistic));
  EXPECT_TRUE(ok.passed());
  EXPECT_FALSE(bad.passed());
}

}  // namespace
}  // namespace pathvol::experimental
