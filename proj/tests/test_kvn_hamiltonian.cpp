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
#include <sstream>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "kvn/block_encoding.hpp"
#include "kvn/emhd_model.hpp"
#include "kvn/errors.hpp"
#include "kvn/kvn_hamiltonian.hpp"
#include "oracles.hpp"

namespace {

kvn::OdeSystem line_system(std::size_t nx, double omega_p, double dx = 1.0) {
  return kvn::build_system(kvn::GridSpec::line(nx, dx), kvn::PhysicalParams::nondimensional(omega_p));
}

void expect_matches_oracle(const kvn::OdeSystem &sys, unsigned m, double lambda) {
  const auto h = kvn::assemble(sys, m, lambda);
  const Eigen::MatrixXcd dense(h.matrix());
  const auto expect = oracle::kvn_hamiltonian(sys, m, lambda);
  ASSERT_EQ(dense.rows(), expect.rows());
  EXPECT_LT((dense - expect).cwiseAbs().maxCoeff(), 1e-13 * std::max(1.0, expect.cwiseAbs().maxCoeff()))
      << "m=" << m << " lambda=" << lambda;
}

TEST(KvnHamiltonian, MatchesTermByTermOracle) {
  const auto tiny = kvn::tiny_test_system();
  for (unsigned m : {1u, 2u, 3u}) expect_matches_oracle(tiny, m, 1.0);
  for (unsigned m : {1u, 2u, 3u}) expect_matches_oracle(line_system(5, -1.0, 0.7), m, 1.0);
  expect_matches_oracle(line_system(6, -0.1), 2, 2.5);
  expect_matches_oracle(line_system(5, 0.4), 3, 1.6);
  expect_matches_oracle(kvn::build_system(kvn::GridSpec::square(5, 0.5), kvn::PhysicalParams::nondimensional(-1.0)),
                        1, 3.0);
}

TEST(KvnHamiltonian, StructureOfTwoDimensionalOperator) {
  const auto sys = kvn::build_system(kvn::GridSpec::square(5), kvn::PhysicalParams::nondimensional(-1.0));
  const auto h = kvn::assemble(sys, 2, 1.0);
  const auto &mat = h.matrix();
  EXPECT_LE(kvn::hermiticity_defect(mat), 1e-14 * h.max_entry());
  EXPECT_LE(h.max_column_nonzeros(), h.column_sparsity_bound());
  EXPECT_EQ(h.column_sparsity_bound(), 2u * sys.incidence_bound * 8u);
  const auto &basis = h.basis();
  for (Eigen::Index c = 0; c < mat.outerSize(); ++c) {
    const auto kc = oracle::total(basis.unrank(static_cast<std::uint64_t>(c)));
    for (kvn::SparseMatrixC::InnerIterator it(mat, c); it; ++it) {
      EXPECT_EQ(it.value().real(), 0.0);
      const auto kr = oracle::total(basis.unrank(static_cast<std::uint64_t>(it.row())));
      EXPECT_LE(std::abs(static_cast<int>(kr) - static_cast<int>(kc)), 2);
    }
  }
  // the vacuum column is zero: the empty state is stationary
  EXPECT_EQ(mat.col(0).nonZeros(), 0);
}

TEST(KvnHamiltonian, PlasmaOscillationNorms) {
  // eight decoupled u-E pairs with unit coupling at m = 1
  const auto h = kvn::assemble(line_system(8, -1.0), 1, 1e4);
  EXPECT_NEAR(h.frobenius_norm(), 4.0, 1e-12);
  EXPECT_NEAR(h.spectral().value, 1.0, 1e-6);
}

TEST(KvnHamiltonian, NormsAgreeWithDenseComputation) {
  const auto sys = line_system(6, -0.3);
  const auto h = kvn::assemble(sys, 3, 1.0);
  const Eigen::MatrixXcd dense(h.matrix());
  EXPECT_NEAR(h.frobenius_norm(), dense.norm(), 1e-12 * dense.norm());
  EXPECT_NEAR(kvn::streamed_frobenius_norm(sys, 3, 1.0), dense.norm(), 1e-12 * dense.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
  const double exact = es.eigenvalues().cwiseAbs().maxCoeff();
  const auto est = h.spectral();
  EXPECT_LE(est.lower, exact * (1 + 1e-12));
  EXPECT_GE(est.upper, exact * (1 - 1e-12));
  EXPECT_NEAR(est.value, exact, 1e-5 * exact);
  EXPECT_GE(h.max_column_sum(), exact * (1 - 1e-12));
  double entry = 0.0;
  for (Eigen::Index i = 0; i < dense.size(); ++i) entry = std::max(entry, std::abs(dense(i)));
  EXPECT_DOUBLE_EQ(h.max_entry(), entry);
}

TEST(KvnHamiltonian, AssemblyIsThreadIndependent) {
  const auto sys = kvn::build_system(kvn::GridSpec::square(6), kvn::PhysicalParams::nondimensional(-1.0));
  kvn::AssemblyOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const auto a = kvn::assemble(sys, 2, 1.0, one);
  const auto b = kvn::assemble(sys, 2, 1.0, many);
  ASSERT_EQ(a.nonzeros(), b.nonzeros());
  EXPECT_EQ((a.matrix() - b.matrix()).norm(), 0.0);
}

TEST(KvnHamiltonian, MatrixMarketRoundTrip) {
  const auto h = kvn::assemble(line_system(5, -1.0), 2, 1.0);
  std::stringstream ss;
  kvn::write_matrix_market(ss, h.matrix());
  const auto back = kvn::read_matrix_market(ss);
  EXPECT_EQ((back - h.matrix()).norm(), 0.0);
}

TEST(KvnHamiltonian, LadderAndEta) {
  const kvn::OccupancyVector occ{2, 0, 1};
  const auto down = kvn::ladder_apply(occ, 0, kvn::LadderKind::annihilate, 3);
  ASSERT_TRUE(down);
  EXPECT_EQ(down->occ, (kvn::OccupancyVector{1, 0, 1}));
  EXPECT_DOUBLE_EQ(down->amplitude, std::sqrt(2.0));
  EXPECT_FALSE(kvn::ladder_apply(occ, 1, kvn::LadderKind::annihilate, 3));
  EXPECT_FALSE(kvn::ladder_apply(occ, 1, kvn::LadderKind::create, 3));
  const auto up = kvn::ladder_apply(occ, 2, kvn::LadderKind::create, 4);
  ASSERT_TRUE(up);
  EXPECT_DOUBLE_EQ(up->amplitude, std::sqrt(2.0));

  const auto tiny = kvn::tiny_test_system();
  EXPECT_DOUBLE_EQ(kvn::eta(tiny, 1.0), 0.7);
}

TEST(KvnHamiltonian, CapacityGuard) {
  const auto sys = kvn::build_system(kvn::GridSpec::square(12), kvn::PhysicalParams::nondimensional(-1.0));
  kvn::AssemblyOptions opts;
  opts.memory_cap_bytes = 1 << 20;
  EXPECT_THROW(kvn::assemble(sys, 2, 1.0, opts), kvn::CapacityError);
}

} // namespace
