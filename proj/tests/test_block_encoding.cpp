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

#include <gtest/gtest.h>

#include "kvn/block_encoding.hpp"
#include "kvn/kvn_hamiltonian.hpp"

namespace {

double top_left_deviation(const Eigen::MatrixXcd &a) {
  const auto orc = kvn::build_oracles(a);
  const auto u = kvn::assemble_dense_encoding(orc);
  const double s = static_cast<double>(orc.sparsity);
  const double amax = a.cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd expect = a / (s * s * amax);
  EXPECT_LT((u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff(), 1e-12);
  return (u.topLeftCorner(a.rows(), a.cols()) - expect).cwiseAbs().maxCoeff();
}

TEST(BlockEncoding, RandomSparseHermitianBlocks) {
  std::mt19937_64 rng(2026);
  for (int k = 0; k < 5; ++k) {
    const auto a = kvn::random_sparse_hermitian(rng, 4, 2);
    EXPECT_LT((a - a.adjoint()).norm(), 1e-15);
    EXPECT_LT(top_left_deviation(a), 1e-12);
  }
  const auto suite = kvn::verify_random_blocks(99, 20);
  EXPECT_EQ(suite.instances, 20u);
  EXPECT_LT(suite.worst_deviation, 1e-12);
  EXPECT_LT(suite.worst_unitarity_defect, 1e-12);
}

TEST(BlockEncoding, HandWorkedPauliX) {
  Eigen::MatrixXcd x(2, 2);
  x << 0, 1, 1, 0;
  const auto orc = kvn::build_oracles(x);
  EXPECT_EQ(orc.sparsity, 1u);
  EXPECT_EQ(orc.width, 1u);
  EXPECT_EQ(orc.columns[0][0], 1u);
  EXPECT_EQ(orc.columns[1][0], 0u);
  EXPECT_LT(top_left_deviation(x), 1e-14);
}

TEST(BlockEncoding, AssembledOperator) {
  const auto h = kvn::assemble(kvn::tiny_test_system(), 1, 1.0);
  const Eigen::MatrixXcd dense(h.matrix());
  const auto orc = kvn::build_oracles(h);
  EXPECT_EQ(orc.dimension, 4u);
  EXPECT_LE(orc.sparsity, h.column_sparsity_bound());
  const auto rep = kvn::verify_block(orc, dense);
  EXPECT_LT(rep.max_deviation, 1e-12);
  EXPECT_LT(rep.unitarity_defect, 1e-12);
  EXPECT_NEAR(rep.normalization, static_cast<double>(orc.sparsity * orc.sparsity) * h.max_entry(), 1e-14);
  EXPECT_LT(top_left_deviation(dense), 1e-12);
}

TEST(BlockEncoding, NegativeDiagonalIsOutsideTheEncodableClass) {
  Eigen::MatrixXcd z(2, 2);
  z << 1, 0, 0, -1;
  const auto rep = kvn::verify_block(kvn::build_oracles(z), z);
  EXPECT_NEAR(rep.max_deviation, 2.0, 1e-12);
}

} // namespace
