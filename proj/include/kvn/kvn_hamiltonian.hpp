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

// Truncated Koopman-von Neumann Hamiltonian
//
//     H_m = P_m [ sum_p sum_{j in p} alpha_{p->j} / Lambda^{|p|-2}
//                 k_j prod_{l in p\{j}} x_l ] P_m
//
// with x = (a + a^dag)/sqrt(2) and k = (a - a^dag)/(sqrt(2) i). Every entry
// of H_m is purely imaginary, so H_m = i A with A real and antisymmetric.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "kvn/emhd_model.hpp"
#include "kvn/fock_basis.hpp"

namespace kvn {

using Complex = std::complex<double>;
using SparseMatrixC = Eigen::SparseMatrix<Complex, Eigen::ColMajor, std::int64_t>;

enum class LadderKind { create, annihilate };

struct LadderResult {
  OccupancyVector occ;
  double amplitude;
};

/// Single ladder step on a number state. Returns nothing when the result
/// leaves the space: annihilation of an empty mode, or creation that pushes
/// the total above `cap`.
std::optional<LadderResult> ladder_apply(std::span<const std::uint8_t> occ, std::size_t mode, LadderKind kind,
                                         unsigned cap);

/// max over interactions and legs of |alpha_{p->j}| / Lambda^{|p|-2}.
double eta(const OdeSystem &sys, double lambda);

struct AssemblyOptions {
  std::size_t memory_cap_bytes = std::size_t{3} << 30;
  unsigned threads = 0; ///< 0 selects the hardware concurrency
};

struct SpectralEstimate {
  double value = 0.0; ///< certified lower bound, converged to the requested tolerance
  double lower = 0.0;
  double upper = 0.0; ///< min(Frobenius norm, max absolute column sum)
  int iterations = 0;
};

class SparseHamiltonian {
public:
  SparseHamiltonian(TruncatedFockBasis basis, SparseMatrixC matrix, double lambda, double eta,
                    std::size_t column_bound);

  const TruncatedFockBasis &basis() const noexcept { return basis_; }
  const SparseMatrixC &matrix() const noexcept { return matrix_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix_.cols()); }
  double lambda() const noexcept { return lambda_; }
  double eta() const noexcept { return eta_; }
  double max_entry() const noexcept { return max_entry_; }
  double frobenius_norm() const noexcept { return frobenius_; }
  /// Upper bound on the spectral norm from the largest absolute column sum.
  double max_column_sum() const noexcept { return max_col_sum_; }
  /// Structural bound m c 2^d on nonzeros per column.
  std::size_t column_sparsity_bound() const noexcept { return column_bound_; }
  std::size_t max_column_nonzeros() const noexcept { return max_col_nnz_; }
  std::size_t nonzeros() const noexcept { return static_cast<std::size_t>(matrix_.nonZeros()); }

  /// Lanczos estimate, computed on first use and cached.
  const SpectralEstimate &spectral() const;

  void apply(const Eigen::VectorXcd &in, Eigen::VectorXcd &out) const;

private:
  TruncatedFockBasis basis_;
  SparseMatrixC matrix_;
  double lambda_;
  double eta_;
  std::size_t column_bound_;
  double max_entry_ = 0.0;
  double frobenius_ = 0.0;
  double max_col_sum_ = 0.0;
  std::size_t max_col_nnz_ = 0;
  mutable std::optional<SpectralEstimate> spectral_;
};

SparseHamiltonian assemble(const OdeSystem &sys, unsigned order, double lambda, const AssemblyOptions &opts = {});

/// Exact Frobenius norm of H_m computed column by column without storing the
/// matrix. Used to size runs whose operator does not fit in memory.
double streamed_frobenius_norm(const OdeSystem &sys, unsigned order, double lambda);

/// Lanczos with full reorthogonalization. Throws EstimationError with the
/// best bracket when `max_iterations` is reached before `rtol`.
SpectralEstimate spectral_norm_estimate(const SparseMatrixC &h, double rtol = 1e-6, int max_iterations = 300);

/// max |H_ij - conj(H_ji)|.
double hermiticity_defect(const SparseMatrixC &h);

/// Matrix Market coordinate complex general, 17 significant digits, 1-based.
void write_matrix_market(std::ostream &os, const SparseMatrixC &h);
SparseMatrixC read_matrix_market(std::istream &is);

} // namespace kvn
