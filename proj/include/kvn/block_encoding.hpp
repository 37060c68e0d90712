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

#pragma once

// Dense-matrix check of the sparse-access block encoding V^dag SWAP V with
// V = O_C O_A (D x D). Registers, most significant first:
//
//     a (1) | b (1) | L (ceil log2 s) | C (w+1) | K (ceil log2 s) | I (w+1)
//
// SWAP exchanges a<->b, L<->K and C<->I. The top-left 2^w block (all
// ancillas zero, top bit of I zero) equals A / (s^2 A_max).
//
// The amplitude oracle uses a pair-consistent square root: the principal
// root on and below the diagonal and conj(sqrt(A_ji)) above it, so that
// conj(f(A_ij)) f(A_ji) = A_ji holds on both sides of the branch cut. The
// diagonal reproduces |A_ii|, so negative diagonal entries cannot be encoded.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "kvn/kvn_hamiltonian.hpp"

namespace kvn {

struct SparseAccessOracle {
  std::size_t dimension = 0; ///< size of A before padding
  unsigned width = 0;        ///< w, padded dimension 2^w
  std::size_t sparsity = 1;  ///< s
  double max_entry = 0.0;    ///< A_max
  /// columns[j][l] = c(j,l) for j < 2^w, l < s; sentinel j + 2^w when absent
  std::vector<std::vector<std::uint64_t>> columns;
  /// entries[j][l] = A_{c(j,l), j}, zero for sentinel slots
  std::vector<std::vector<std::complex<double>>> entries;

  unsigned index_bits() const noexcept; ///< ceil(log2 s)
  unsigned total_qubits() const noexcept;
  /// Amplitude f of O_A for slot (j, l), already divided by sqrt(A_max).
  std::complex<double> amplitude(std::size_t column, std::size_t slot) const;
};

SparseAccessOracle build_oracles(const Eigen::MatrixXcd &a);
/// Also checks the per-column count against the structural bound m c 2^d.
SparseAccessOracle build_oracles(const SparseHamiltonian &h);

/// Explicit V^dag SWAP V. Throws CapacityError above `max_qubits` qubits.
Eigen::MatrixXcd assemble_dense_encoding(const SparseAccessOracle &orc, unsigned max_qubits = 12);

struct BlockReport {
  double max_deviation = 0.0;
  double normalization = 0.0; ///< s^2 A_max
  double unitarity_defect = 0.0;
};

BlockReport verify_block(const SparseAccessOracle &orc, const Eigen::MatrixXcd &a);

/// Random Hermitian matrix with at most `max_sparsity` (1 or 2) nonzeros per
/// column and a non-negative diagonal.
Eigen::MatrixXcd random_sparse_hermitian(std::mt19937_64 &rng, std::size_t dim, std::size_t max_sparsity);

struct BlockSuiteReport {
  std::size_t instances = 0;
  double worst_deviation = 0.0;
  double worst_unitarity_defect = 0.0;
};

/// verify_block over `count` random instances of random_sparse_hermitian.
BlockSuiteReport verify_random_blocks(std::uint64_t seed, std::size_t count, std::size_t dim = 4,
                                      std::size_t max_sparsity = 2);

/// Three variables coupled by two pair interactions; at m = 1 its H_m is
/// 4 x 4, small enough for the dense block-encoding check.
OdeSystem tiny_test_system();

} // namespace kvn
