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
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "kvn/emhd_model.hpp"
#include "kvn/errors.hpp"
#include "oracles.hpp"

namespace {

using kvn::FieldComponent;
using F = kvn::FieldComponent;

kvn::FieldGrid random_fields(const kvn::GridSpec &grid, std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  kvn::FieldGrid fg;
  for (auto c : kvn::model_components(grid.dimension)) {
    fg[c].resize(grid.point_count());
    for (auto &v : fg[c]) v = g(rng);
  }
  return fg;
}

oracle::Fields as_oracle(const kvn::FieldGrid &fg) {
  oracle::Fields f;
  f.u1 = fg[F::u1];
  f.e1 = fg[F::E1];
  if (fg.has(F::u2)) {
    f.u2 = fg[F::u2];
    f.e2 = fg[F::E2];
    f.b3 = fg[F::B3];
  }
  return f;
}

void expect_rhs_matches_literal(const kvn::GridSpec &grid, double omega_p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto params = kvn::PhysicalParams::nondimensional(omega_p);
  const auto sys = kvn::build_system(grid, params);
  ASSERT_TRUE(kvn::validate_system(sys).ok());
  const kvn::VariableLayout layout(grid);
  const auto fg = random_fields(grid, rng);
  const auto rhs = layout.unpack(kvn::classical_rhs(sys, layout.pack(fg)));
  const auto expect = oracle::literal_rhs(as_oracle(fg), grid.points[0], grid.points[1], grid.spacing[0],
                                          grid.spacing[1], omega_p);
  for (std::size_t p = 0; p < grid.point_count(); ++p) {
    EXPECT_NEAR(rhs[F::u1][p], expect.u1[p], 1e-12);
    EXPECT_NEAR(rhs[F::E1][p], expect.e1[p], 1e-12);
    if (grid.dimension == 2) {
      EXPECT_NEAR(rhs[F::u2][p], expect.u2[p], 1e-12);
      EXPECT_NEAR(rhs[F::E2][p], expect.e2[p], 1e-12);
      EXPECT_NEAR(rhs[F::B3][p], expect.b3[p], 1e-12);
    }
  }
}

TEST(EmhdModel, OneDimensionalRhsMatchesLiteralStencil) {
  expect_rhs_matches_literal(kvn::GridSpec::line(7, 0.5), -1.0, 1);
  expect_rhs_matches_literal(kvn::GridSpec::line(8, 1.0), -0.1, 2);
  expect_rhs_matches_literal(kvn::GridSpec::line(5, 2.0), 0.7, 3);
}

TEST(EmhdModel, TwoDimensionalRhsMatchesLiteralStencil) {
  expect_rhs_matches_literal(kvn::GridSpec::square(5, 1.0), -1.0, 4);
  expect_rhs_matches_literal(kvn::GridSpec::square(6, 0.3), -0.4, 5);
}

TEST(EmhdModel, SystemsValidateWithBoundedIncidence) {
  for (auto grid : {kvn::GridSpec::line(5), kvn::GridSpec::line(12), kvn::GridSpec::square(5),
                    kvn::GridSpec::square(12), kvn::GridSpec::cube(5)}) {
    const auto sys = kvn::build_system(grid, kvn::PhysicalParams::nondimensional(-1.0));
    EXPECT_TRUE(kvn::validate_system(sys).ok());
    EXPECT_EQ(sys.variable_count, grid.point_count() * kvn::model_components(grid.dimension).size());
    std::vector<unsigned> seen(sys.variable_count, 0);
    for (const auto &it : sys.interactions) {
      EXPECT_GE(it.vars.size(), 2u);
      EXPECT_LE(it.vars.size(), 3u);
      double sum = 0.0;
      for (double a : it.alpha) sum += a;
      EXPECT_NEAR(sum, 0.0, 1e-14);
      for (auto v : it.vars) ++seen[v];
    }
    for (auto s : seen) EXPECT_LE(s, sys.incidence_bound);
  }
}

TEST(EmhdModel, RhsConservesQuadraticNorm) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto grid : {kvn::GridSpec::line(9, 0.7), kvn::GridSpec::square(6, 0.5)}) {
    const auto sys = kvn::build_system(grid, kvn::PhysicalParams::nondimensional(-0.3));
    std::vector<double> x(sys.variable_count);
    for (auto &v : x) v = g(rng);
    const auto r = kvn::classical_rhs(sys, x);
    double dot = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      dot += x[i] * r[i];
      scale += std::abs(x[i] * r[i]);
    }
    EXPECT_LT(std::abs(dot), 1e-12 * scale);
  }
}

TEST(EmhdModel, UniformVelocityHasNoAdvection) {
  const auto grid = kvn::GridSpec::square(6, 0.4);
  const auto params = kvn::PhysicalParams::nondimensional(-1.0);
  kvn::FieldGrid fg;
  for (auto c : kvn::model_components(2)) fg[c].assign(grid.point_count(), 0.0);
  fg[F::u1].assign(grid.point_count(), 0.8);
  fg[F::u2].assign(grid.point_count(), -0.3);
  for (std::size_t p = 0; p < grid.point_count(); ++p) {
    EXPECT_NEAR(kvn::discrete_nonlinear_term(fg, grid, params, 1, p), 0.0, 1e-14);
    EXPECT_NEAR(kvn::discrete_nonlinear_term(fg, grid, params, 2, p), 0.0, 1e-14);
  }
}

TEST(EmhdModel, NonlinearStencilContinuumLimit) {
  // u = sin(kx): the stencil tends to -(3/2) u du/dx with second-order error
  const double length = 2.0 * std::numbers::pi;
  std::vector<double> errors;
  for (std::size_t n : {32u, 64u, 128u}) {
    const double dx = length / static_cast<double>(n);
    const auto grid = kvn::GridSpec::line(n, dx);
    const auto params = kvn::PhysicalParams::nondimensional(-1.0);
    kvn::FieldGrid fg;
    fg[F::u1].resize(n);
    fg[F::E1].assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) fg[F::u1][j] = std::sin(j * dx);
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = j * dx;
      err = std::max(err, std::abs(kvn::discrete_nonlinear_term(fg, grid, params, 1, j) +
                                   1.5 * std::sin(x) * std::cos(x)));
    }
    errors.push_back(err);
  }
  EXPECT_NEAR(std::log2(errors[0] / errors[1]), 2.0, 0.1);
  EXPECT_NEAR(std::log2(errors[1] / errors[2]), 2.0, 0.1);
}

TEST(EmhdModel, TransformRoundTripAndLayout) {
  std::mt19937_64 rng(3);
  const auto grid = kvn::GridSpec::square(5, 0.5);
  auto params = kvn::PhysicalParams::nondimensional(-1.0);
  params.density.assign(grid.point_count(), 0.0);
  for (std::size_t p = 0; p < grid.point_count(); ++p) params.density[p] = 0.5 + 0.1 * static_cast<double>(p % 5);
  kvn::RawFields raw;
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto c : kvn::model_components(2)) {
    raw[c].resize(grid.point_count());
    for (auto &v : raw[c]) v = g(rng);
  }
  const auto fg = kvn::transform_fields(raw, grid, params);
  const auto back = kvn::inverse_transform(fg, grid, params);
  for (auto c : kvn::model_components(2))
    for (std::size_t p = 0; p < grid.point_count(); ++p) EXPECT_NEAR(back[c][p], raw[c][p], 1e-12);

  const kvn::VariableLayout layout(grid);
  const auto x = layout.pack(fg);
  EXPECT_EQ(x.size(), 5 * grid.point_count());
  const auto un = layout.unpack(x);
  for (auto c : kvn::model_components(2)) {
    EXPECT_EQ(un[c], fg[c]);
    for (std::size_t p = 0; p < grid.point_count(); ++p) EXPECT_EQ(x[layout.index(c, p)], fg[c][p]);
  }
  EXPECT_FALSE(layout.has(F::u3));
}

TEST(EmhdModel, LeviCivitaAndGrid) {
  EXPECT_EQ(kvn::levi_civita(1, 2, 3), 1);
  EXPECT_EQ(kvn::levi_civita(2, 1, 3), -1);
  EXPECT_EQ(kvn::levi_civita(3, 1, 2), 1);
  EXPECT_EQ(kvn::levi_civita(1, 1, 2), 0);
  const auto g = kvn::GridSpec::square(5);
  const auto p = g.flat({4, 0, 0});
  EXPECT_EQ(g.coords(g.shifted(p, 0, 1))[0], 0u);
  EXPECT_EQ(g.coords(g.shifted(p, 1, -1))[1], 4u);
}

TEST(EmhdModel, SystemSerializationRoundTrip) {
  const auto sys = kvn::build_system(kvn::GridSpec::square(5), kvn::PhysicalParams::nondimensional(-1.0));
  std::stringstream ss;
  kvn::write_system(ss, sys);
  const auto back = kvn::read_system(ss);
  ASSERT_EQ(back.variable_count, sys.variable_count);
  ASSERT_EQ(back.interactions.size(), sys.interactions.size());
  for (std::size_t k = 0; k < sys.interactions.size(); ++k) {
    EXPECT_EQ(back.interactions[k].vars, sys.interactions[k].vars);
    EXPECT_EQ(back.interactions[k].alpha, sys.interactions[k].alpha);
  }
}

TEST(EmhdModel, RejectsBadInput) {
  EXPECT_THROW(kvn::GridSpec::line(4).validate(), kvn::ConfigurationError);
  kvn::OdeSystem bad;
  bad.variable_count = 3;
  bad.incidence_bound = 1;
  bad.interactions.push_back({{0, 1}, {1.0, 0.5}});
  const auto rep = kvn::validate_system(bad);
  ASSERT_FALSE(rep.ok());
  EXPECT_EQ(rep.violations.front().condition, kvn::Violation::Condition::zero_sum);
}

} // namespace
