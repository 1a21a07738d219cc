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

#include "pathvol/yprocess.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "pathvol/gbm.hpp"
#include "pathvol/pathwise.hpp"
#include "pathvol/stats.hpp"

namespace pathvol {
namespace {

ModelParams base_params() { return validate(ModelParams{}); }

ModelParams matched_params() {
  ModelParams p = base_params();
  p.nu = p.sigma_bar;
  return p;
}

TEST(DriftNuTest, AnchorValue) {
  EXPECT_NEAR(drift_nu(100.0, 100.0, 0.5, 0.25, base_params()), 28.0, 1e-12);
}

TEST(DriftNuTest, AnchorIsRemovableSingularity) {
  const ModelParams p = base_params();
  EXPECT_NEAR(drift_nu(100.0, 100.0, 1e-300, 0.0, p), 28.0, 1e-12);
}

TEST(DriftNuTest, MatchedVolsGiveBsmDrift) {
  const ModelParams p = matched_params();
  for (double y : {50.0, 100.0, 173.0}) {
    EXPECT_NEAR(drift_nu(y, 100.0, 0.3, 0.25, p), p.mu * y, 1e-12 * y);
  }
}

TEST(DriftNuTest, LogTermPullsTowardAnchorWhenBetaNegative) {
  const ModelParams p = base_params();
  const double level = 28.0 / 100.0;
  const double y = 110.0;
  const double expected =
      y * level + y / (2.0 * 0.1) * p.beta() * std::log(y / 100.0);
  EXPECT_NEAR(drift_nu(y, 100.0, 0.35, 0.25, p), expected, 1e-10);
  EXPECT_LT(drift_nu(y, 100.0, 0.35, 0.25, p), y * level);
}

TEST(DriftNuTest, SingularTimeIsAnError) {
  const ModelParams p = base_params();
  EXPECT_THROW(drift_nu(100.0, 100.0, 0.25, 0.25, p), Error);
  EXPECT_THROW(drift_nu(101.0, 100.0, 0.2, 0.25, p), Error);
  EXPECT_THROW(drift_nu(-1.0, 100.0, 0.3, 0.25, p), Error);
}

TEST(KernelCovarianceTest, HandValue) {
  const KernelCovariance c(base_params());
  EXPECT_NEAR(c(0.5, 1.0), 0.04 * 0.5 * std::pow(2.0, -1.5), 1e-15);
  EXPECT_NEAR(c(0.5, 1.0), 0.0070711, 1e-7);
  EXPECT_EQ(c(0.5, 1.0), c(1.0, 0.5));
  EXPECT_EQ(c(0.0, 1.0), 0.0);
}

TEST(KernelCovarianceTest, DiagonalIsLinear) {
  for (double beta : {0.9, 0.0, -3.0, -24.0}) {
    const KernelCovariance c(beta, 0.3);
    for (double t : {1e-6, 0.01, 0.5, 3.0}) {
      EXPECT_NEAR(c(t, t), 0.09 * t, 1e-15 * t);
    }
  }
}

TEST(KernelCovarianceTest, BrownianWhenBetaIsZero) {
  const KernelCovariance c(0.0, 0.2);
  EXPECT_NEAR(c(0.3, 0.9), 0.04 * 0.3, 1e-16);
}

TEST(KernelCovarianceTest, TinyFirstTimeDoesNotOverflow) {
  const KernelCovariance c(-24.0, 0.2);
  const double v = c(1e-12, 1.0);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GE(v, 0.0);
}

// X_t = nu * int_0^t (t/u)^{beta/2} dW_u simulated by a midpoint Riemann sum
// with std::mt19937_64, then the sample covariance is compared with c(s, t).
TEST(KernelCovarianceTest, MatchesMonteCarloOfKernelIntegral) {
  const ModelParams p = base_params();
  const double beta = p.beta();
  constexpr int kSteps = 400;
  constexpr int kPaths = 20000;
  const double s = 0.5;
  const double t = 1.0;
  const double h = t / kSteps;
  std::mt19937_64 gen(314159);
  std::normal_distribution<double> z;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int path = 0; path < kPaths; ++path) {
    double xs = 0.0, xt = 0.0;
    for (int k = 0; k < kSteps; ++k) {
      const double u = (k + 0.5) * h;
      const double dw = std::sqrt(h) * z(gen);
      xt += p.nu * std::pow(t / u, 0.5 * beta) * dw;
      if (u < s) xs += p.nu * std::pow(s / u, 0.5 * beta) * dw;
    }
    sxx += xs * xs;
    syy += xt * xt;
    sxy += xs * xt;
  }
  const KernelCovariance c(p);
  const double n = kPaths;
  const double se_cov = std::sqrt((c(s, s) * c(t, t) + c(s, t) * c(s, t)) / n);
  EXPECT_NEAR(sxy / n, c(s, t), 4.0 * se_cov);
  EXPECT_NEAR(sxx / n, c(s, s), 4.0 * std::sqrt(2.0 / n) * c(s, s));
  EXPECT_NEAR(syy / n, c(t, t), 4.0 * std::sqrt(2.0 / n) * c(t, t));
}

TEST(ExactBlockSamplerTest, StructuredFactorMatchesDenseCholesky) {
  for (double nu : {0.1, 0.2, 0.4, 0.8}) {
    ModelParams p = base_params();
    p.nu = nu;
    const ExactBlockSampler structured(p, 60, Factorization::kStructured);
    const ExactBlockSampler dense(p, 60, Factorization::kDense);
    const Eigen::MatrixXd a = structured.factor();
    const Eigen::MatrixXd b = dense.factor();
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-10) << "nu=" << nu;
    // And both reproduce the kernel matrix.
    const KernelCovariance kernel(p);
    const auto times = structured.local_times().subspan(1);
    EXPECT_LE((a * a.transpose() - kernel.matrix(times)).cwiseAbs().maxCoeff(),
              1e-14);
  }
}

TEST(ExactBlockSamplerTest, DenseCholeskySucceedsAcrossBetaAndGrids) {
  for (double nu : {0.1, 0.2, 0.4, 1.0}) {
    for (std::size_t m : {1u, 10u, 200u}) {
      ModelParams p = base_params();
      p.nu = nu;
      EXPECT_NO_THROW(ExactBlockSampler(p, m, Factorization::kDense))
          << "nu=" << nu << " m=" << m;
    }
  }
}

TEST(ExactBlockSamplerTest, FactorizationsProduceTheSamePath) {
  const ModelParams p = base_params();
  const Path a = simulate_y_exact(p, 40, 9, 2, Factorization::kStructured);
  const Path b = simulate_y_exact(p, 40, 9, 2, Factorization::kDense);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a.value(i), b.value(i), 1e-10 * a.value(i));
  }
}

TEST(SimulateYExactTest, MatchedVolsReproduceGbm) {
  const ModelParams p = matched_params();
  for (std::size_t m : {1u, 7u, 100u}) {
    const Path y = simulate_y_exact(p, m, 1234, 5);
    const Path s = simulate_gbm(p, p.mu, p.sigma_bar, m, 1234, 5);
    ASSERT_EQ(y.size(), s.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      ASSERT_EQ(y.time(i), s.time(i));
      ASSERT_NEAR(y.value(i), s.value(i), 1e-10 * s.value(i)) << i;
    }
  }
}

TEST(SimulateYEulerTest, MatchedVolsReproduceGbm) {
  const ModelParams p = matched_params();
  const Path y = simulate_y_euler(p, 200, 77, 1);
  const Path s = simulate_gbm(p, p.mu, p.sigma_bar, 200, 77, 1);
  ASSERT_EQ(y.size(), s.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    ASSERT_EQ(y.time(i), s.time(i));
    ASSERT_NEAR(y.value(i), s.value(i), 1e-10 * s.value(i)) << i;
  }
}

TEST(SimulateYEulerTest, WindowMustHoldAStep) {
  const ModelParams p = base_params();
  EXPECT_THROW(EulerBlockSampler(p, 5), Error);
  EXPECT_THROW(EulerBlockSampler(p, 1), Error);
  const EulerBlockSampler ok(p, 10);
  EXPECT_EQ(ok.window_steps(), 1u);
  EXPECT_TRUE(ok.uniform());
}

TEST(SimulateYEulerTest, NonIntegralWindowLandsOnEpsilon) {
  ModelParams p = base_params();
  p.epsilon = p.delta / 3.0;
  const EulerBlockSampler sampler(p, 200);
  EXPECT_FALSE(sampler.uniform());
  const auto t = sampler.local_times();
  EXPECT_DOUBLE_EQ(t[sampler.window_steps()], p.epsilon);
  EXPECT_EQ(t.back(), p.delta);
  for (std::size_t k = 1; k < t.size(); ++k) ASSERT_GT(t[k], t[k - 1]);
}

TEST(YProcessTest, PositiveUnderStrongMeanReversion) {
  ModelParams p = base_params();
  p.nu = 0.6;
  for (std::uint64_t i = 0; i < 20; ++i) {
    for (const Path& path :
         {simulate_y_exact(p, 200, 3, i), simulate_y_euler(p, 200, 3, i)}) {
      for (std::size_t k = 0; k < path.size(); ++k) ASSERT_GT(path.value(k), 0.0);
    }
  }
}

TEST(YProcessTest, SameSeedIsBitwiseIdentical) {
  const ModelParams p = base_params();
  const Path a = simulate_y_euler(p, 200, 5, 9);
  const Path b = simulate_y_euler(p, 200, 5, 9);
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a.value(i), b.value(i));
  const YSimulator sim(p, YScheme::kExact, 16);
  RandomStream s1(5, stream_id(9));
  RandomStream s2(5, stream_id(9));
  const Path c = sim(s1);
  const Path d = sim(s2);
  for (std::size_t i = 0; i < c.size(); ++i) ASSERT_EQ(c.value(i), d.value(i));
  EXPECT_EQ(c.size(), 12u * 16u + 1u);
}

// A block depends on the past only through its anchor value.
TEST(YProcessTest, BlocksDependOnlyOnTheAnchor) {
  const ModelParams p = base_params();
  const ExactBlockSampler exact(p, 50);
  const EulerBlockSampler euler(p, 200);
  RandomStream draws(42, stream_id(0, StreamPurpose::kAuxiliary));
  for (int rep = 0; rep < 5; ++rep) {
    RandomStream a = draws;
    RandomStream b = draws;
    RandomStream c = draws;
    RandomStream d = draws;
    const BlockState early{1, p.delta, 117.0};
    const BlockState late{9, 9.0 * p.delta, 117.0};
    EXPECT_EQ(exact.sample(early, a), exact.sample(late, b));
    EXPECT_EQ(euler.sample(early, c), euler.sample(late, d));
    for (int i = 0; i < 200; ++i) draws.normal();
  }
}

TEST(YProcessTest, BlockScalesWithAnchor) {
  const ModelParams p = base_params();
  const ExactBlockSampler exact(p, 25);
  RandomStream a(1, 0);
  RandomStream b(1, 0);
  const auto x = exact.sample({0, 0.0, 100.0}, a);
  const auto y = exact.sample({0, 0.0, 250.0}, b);
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(y[k] / x[k], 2.5, 1e-13);
}

std::vector<double> block_end_returns(const YSimulator& sim, std::size_t paths,
                                      std::size_t sub_steps) {
  std::vector<double> out;
  out.reserve(paths);
  for (std::size_t i = 0; i < paths; ++i) {
    RandomStream s(808, stream_id(i));
    const Path path = sim(s);
    out.push_back(std::log(path.value(3 * sub_steps) / path.value(2 * sub_steps)));
  }
  return out;
}

TEST(YProcessTest, BlockEndLawOfBothSchemes) {
  const ModelParams p = base_params();
  const MarginalLaw law = grid_log_return_law(p, 3, 2);
  const auto exact = block_end_returns(YSimulator(p, YScheme::kExact, 8), 20000, 8);
  const auto euler = block_end_returns(YSimulator(p, YScheme::kEuler, 40), 20000, 40);
  EXPECT_TRUE(ks_one_sample(exact, law).passed());
  EXPECT_TRUE(ks_one_sample(euler, law).passed());
  EXPECT_TRUE(ks_two_sample(exact, euler).passed());
}

TEST(YProcessTest, FineMeshLogQuadraticVariation) {
  const ModelParams p = base_params();
  double exact_qv = 0.0;
  double euler_qv = 0.0;
  constexpr int kPaths = 5;
  for (int i = 0; i < kPaths; ++i) {
    exact_qv += realized_qv(simulate_y_exact(p, 1000, 11, i), {}, QvScale::kLog);
    euler_qv += realized_qv(simulate_y_euler(p, 1000, 11, i), {}, QvScale::kLog);
  }
  exact_qv /= kPaths;
  euler_qv /= kPaths;
  EXPECT_NEAR(exact_qv, p.nu * p.nu * p.T, 0.03 * 0.16);
  // The Euler scheme runs sigma_bar dynamics inside each epsilon window.
  const double window = static_cast<double>(p.steps()) * p.epsilon;
  const double euler_expected =
      p.nu * p.nu * (p.T - window) + p.sigma_bar * p.sigma_bar * window;
  EXPECT_NEAR(euler_qv, euler_expected, 0.03 * euler_expected);
}

double mc_call(const ModelParams& p, const GbmDynamics& q, double* se) {
  const OptionSpec call;
  constexpr int kPaths = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < kPaths; ++i) {
    const Path path = simulate_gbm(p, q.drift, q.vol, 1, 2718, i);
    const double x = std::exp(-p.r * p.T) * std::max(path.back() - call.strike, 0.0);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / kPaths;
  *se = std::sqrt((sq / kPaths - mean * mean) / kPaths);
  return mean;
}

TEST(QMeasureTest, PricesMatchBlackScholes) {
  const ModelParams p = base_params();
  const GbmDynamics qy = qmeasure_dynamics_y(p);
  const GbmDynamics qs = qmeasure_dynamics_s(p);
  EXPECT_EQ(qy.drift, p.r);
  EXPECT_EQ(qy.vol, p.nu);
  EXPECT_EQ(qs.vol, p.sigma_bar);
  double se_y = 0.0;
  double se_s = 0.0;
  const double y_price = mc_call(p, qy, &se_y);
  const double s_price = mc_call(p, qs, &se_s);
  EXPECT_NEAR(y_price, bs_price(p.s0, OptionSpec{}, p.r, p.nu), 3.0 * se_y);
  EXPECT_NEAR(s_price, bs_price(p.s0, OptionSpec{}, p.r, p.sigma_bar), 3.0 * se_s);
}

TEST(QMeasureTest, RiskNeutralWorldIsPhysical) {
  ModelParams p = matched_params();
  p.r = p.mu;
  const GbmDynamics q = qmeasure_dynamics_y(p);
  EXPECT_EQ(q.drift, p.mu);
  EXPECT_EQ(q.vol, p.sigma_bar);
}

}  // namespace
}  // namespace pathvol
