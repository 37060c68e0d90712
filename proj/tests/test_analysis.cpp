// Copyright 2026 The kvnemu Authors
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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "kvn/analysis.hpp"
#include "kvn/emhd_model.hpp"
#include "kvn/errors.hpp"

namespace {

TEST(Analysis, L2Deviation) {
  const std::vector<std::vector<double>> traj{{3.0, 4.0}, {0.0, 5.0}, {1.0, 1.0}, {6.0, 8.0}};
  const auto d = kvn::l2_deviation(traj);
  ASSERT_EQ(d.size(), 4u);
  EXPECT_DOUBLE_EQ(d[0], 0.0);
  EXPECT_DOUBLE_EQ(d[1], 0.0);
  EXPECT_NEAR(d[2], 5.0 - std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(d[3], 5.0);
}

TEST(Analysis, PeriodIsInvariantToAmplitudeSignAndPhase) {
  const double dt = 0.01;
  const double period = 2.0 * std::numbers::pi / 1.3;
  for (double amp : {1e-3, 1.0, -7.0})
    for (double phase : {0.0, 0.4, 2.0}) {
      std::vector<double> s(3000);
      for (std::size_t k = 0; k < s.size(); ++k) s[k] = amp * std::cos(1.3 * k * dt + phase);
      EXPECT_NEAR(kvn::extract_period(s, dt), period, 1e-4 * period);
    }
  EXPECT_THROW(kvn::extract_period(std::vector<double>(100, 1.0), dt), kvn::MeasurementError);
}

TEST(Analysis, GrowthFitRecoversExponent) {
  const double dt = 0.05;
  std::vector<double> s(400);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = 0.02 * std::exp(0.37 * k * dt);
  const auto fit = kvn::growth_rate_fit(s, dt, 1.0, 10.0);
  EXPECT_NEAR(fit.gamma, 0.37, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(0.02), 1e-10);
  EXPECT_LT(fit.residual, 1e-12);
  EXPECT_EQ(fit.points, 181u);
  s[50] = -1.0;
  EXPECT_THROW(kvn::growth_rate_fit(s, dt, 1.0, 10.0), kvn::FitDomainError);
}

TEST(Analysis, JacobianMatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto sys = kvn::build_system(kvn::GridSpec::square(5, 0.6), kvn::PhysicalParams::nondimensional(-0.7));
  std::vector<double> x(sys.variable_count);
  for (auto &v : x) v = g(rng);
  const auto j = kvn::jacobian(sys, x);
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t c = 0; c < x.size(); ++c) {
    auto xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    const auto fp = kvn::classical_rhs(sys, xp), fm = kvn::classical_rhs(sys, xm);
    for (std::size_t r = 0; r < x.size(); ++r)
      worst = std::max(worst, std::abs((fp[r] - fm[r]) / (2 * h) - j(static_cast<Eigen::Index>(r),
                                                                      static_cast<Eigen::Index>(c))));
  }
  EXPECT_LT(worst, 1e-7);
}

TEST(Analysis, StabilityAtRestIsNeutral) {
  // at x = 0 only the linear plasma and wave couplings remain, which are skew
  const auto sys = kvn::build_system(kvn::GridSpec::square(5), kvn::PhysicalParams::nondimensional(-1.0));
  const std::vector<double> zero(sys.variable_count, 0.0);
  const auto mode = kvn::linear_stability_growth_rate(sys, zero);
  EXPECT_NEAR(mode.gamma_max, 0.0, 1e-10);
  EXPECT_GT(mode.frequency, 0.0);
  EXPECT_NEAR(mode.eigen_time, 2.0 * std::numbers::pi / mode.frequency, 1e-12);
  const auto [t0, t1] = kvn::default_fit_window(mode);
  EXPECT_LT(t0, t1);
}

} // namespace
