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
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "kvn/emhd_model.hpp"
#include "kvn/kvn_hamiltonian.hpp"
#include "kvn/kvn_state.hpp"
#include "kvn/reference_solvers.hpp"

namespace {

Eigen::VectorXcd exact_expv(const Eigen::MatrixXcd &h, const Eigen::VectorXcd &psi, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXcd phase = (es.eigenvalues().cast<std::complex<double>>() * std::complex<double>(0.0, -t))
                                     .array()
                                     .exp()
                                     .matrix();
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint() * psi;
}

TEST(ReferenceSolvers, DenseAndKrylovAgreeWithEigenOracle) {
  const auto sys = kvn::build_system(kvn::GridSpec::line(6), kvn::PhysicalParams::nondimensional(-0.4));
  const auto h = kvn::assemble(sys, 3, 1.0);
  std::vector<double> x(sys.variable_count);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.2 * std::cos(0.9 * static_cast<double>(i));
  const auto psi = kvn::encode(x, 1.0, h.basis());
  const Eigen::MatrixXcd dense(h.matrix());
  for (double t : {0.1, 2.0, 15.0}) {
    const auto ref = exact_expv(dense, psi.amplitudes, t);
    kvn::ExpmConfig dc, kc;
    dc.method = kvn::ExpmMethod::dense_eigen;
    kc.method = kvn::ExpmMethod::krylov;
    EXPECT_LT((kvn::evolve_expm(h, psi, t, dc).amplitudes - ref).norm(), 1e-10) << t;
    EXPECT_LT((kvn::evolve_expm(h, psi, t, kc).amplitudes - ref).norm(), 1e-8) << t;
  }
  const std::vector<double> times{0.0, 0.5, 3.0, 9.0};
  kvn::ExpmConfig kc;
  kc.method = kvn::ExpmMethod::krylov;
  const auto series = kvn::evolve_expm_series(h, psi, times, kc);
  ASSERT_EQ(series.size(), times.size());
  for (std::size_t k = 0; k < times.size(); ++k)
    EXPECT_LT((series[k].amplitudes - exact_expv(dense, psi.amplitudes, times[k])).norm(), 1e-8);

  const kvn::DensePropagator prop(dense);
  EXPECT_LT((prop.apply(psi.amplitudes, 4.0) - exact_expv(dense, psi.amplitudes, 4.0)).norm(), 1e-11);
}

TEST(ReferenceSolvers, Rk4IsFourthOrderOnPlasmaOscillation) {
  // du/dt = w E, dE/dt = -w u with w = -1: u = cos t, E = sin t
  const auto grid = kvn::GridSpec::line(5);
  const auto sys = kvn::build_system(grid, kvn::PhysicalParams::nondimensional(-1.0));
  const kvn::VariableLayout layout(grid);
  std::vector<double> x0(sys.variable_count, 0.0);
  for (std::size_t p = 0; p < 5; ++p) x0[layout.index(kvn::FieldComponent::u1, p)] = 1.0;
  std::vector<double> errs;
  for (std::size_t steps : {50u, 100u}) {
    const auto r = kvn::rk4_integrate(sys, x0, 5.0 / steps, steps, steps);
    ASSERT_EQ(r.states.size(), 2u);
    EXPECT_NEAR(r.times.back(), 5.0, 1e-12);
    const auto &x = r.states.back();
    errs.push_back(std::max(std::abs(x[layout.index(kvn::FieldComponent::u1, 2)] - std::cos(5.0)),
                            std::abs(x[layout.index(kvn::FieldComponent::E1, 2)] - std::sin(5.0))));
  }
  EXPECT_NEAR(std::log2(errs[0] / errs[1]), 4.0, 0.2);
}

TEST(ReferenceSolvers, Rk4StoresRequestedSamples) {
  const auto sys = kvn::build_system(kvn::GridSpec::line(5), kvn::PhysicalParams::nondimensional(-1.0));
  std::vector<double> x0(sys.variable_count, 0.1);
  const auto r = kvn::rk4_integrate(sys, x0, 0.01, 25, 10);
  ASSERT_EQ(r.times.size(), 4u); // 0, 10, 20, 25
  EXPECT_NEAR(r.times[1], 0.1, 1e-14);
  EXPECT_NEAR(r.times.back(), 0.25, 1e-14);
  EXPECT_FALSE(r.step_warning);
}

} // namespace
