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

#include "kvn/block_encoding.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SparseCore>

#include "kvn/errors.hpp"

namespace kvn {

namespace {

unsigned ceil_log2(std::uint64_t n) {
  unsigned b = 0;
  while ((std::uint64_t{1} << b) < n) ++b;
  return b;
}

using Column = std::vector<std::pair<std::uint64_t, std::complex<double>>>;

SparseAccessOracle from_columns(const std::vector<Column> &cols, std::size_t dim) {
  SparseAccessOracle orc;
  orc.dimension = dim;
  orc.width = ceil_log2(std::max<std::size_t>(dim, 1));
  std::size_t s = 1;
  for (const auto &c : cols) {
    s = std::max(s, c.size());
    for (const auto &e : c) orc.max_entry = std::max(orc.max_entry, std::abs(e.second));
  }
  if (orc.max_entry == 0.0) orc.max_entry = 1.0;
  orc.sparsity = s;
  const std::uint64_t padded = std::uint64_t{1} << orc.width;
  orc.columns.assign(padded, {});
  orc.entries.assign(padded, {});
  for (std::uint64_t j = 0; j < padded; ++j) {
    orc.columns[j].assign(s, j + padded);
    orc.entries[j].assign(s, 0.0);
    if (j < cols.size()) {
      for (std::size_t l = 0; l < cols[j].size(); ++l) {
        orc.columns[j][l] = cols[j][l].first;
        orc.entries[j][l] = cols[j][l].second;
      }
    }
  }
  return orc;
}

} // namespace

unsigned SparseAccessOracle::index_bits() const noexcept { return ceil_log2(sparsity); }

unsigned SparseAccessOracle::total_qubits() const noexcept { return 2 + 2 * index_bits() + 2 * (width + 1); }

std::complex<double> SparseAccessOracle::amplitude(std::size_t column, std::size_t slot) const {
  const std::uint64_t padded = std::uint64_t{1} << width;
  if (column >= padded || slot >= sparsity) return 0.0;
  const auto row = columns[column][slot];
  if (row >= padded) return 0.0;
  const auto z = entries[column][slot] / max_entry;
  if (row >= column) return std::sqrt(z);
  return std::conj(std::sqrt(std::conj(z)));
}

SparseAccessOracle build_oracles(const Eigen::MatrixXcd &a) {
  if (a.rows() != a.cols()) throw ContractError("build_oracles: matrix is not square");
  const double scale = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1e-300) && scale > 0.0)
    throw ContractError("build_oracles: matrix is not Hermitian");
  std::vector<Column> cols(static_cast<std::size_t>(a.cols()));
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (a(i, j) != 0.0) cols[j].push_back({static_cast<std::uint64_t>(i), a(i, j)});
  return from_columns(cols, static_cast<std::size_t>(a.rows()));
}

SparseAccessOracle build_oracles(const SparseHamiltonian &h) {
  const auto &m = h.matrix();
  if (hermiticity_defect(m) > 1e-12 * std::max(h.max_entry(), 1e-300) && h.max_entry() > 0.0)
    throw ContractError("build_oracles: operator is not Hermitian");
  std::vector<Column> cols(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.outerSize(); ++j)
    for (SparseMatrixC::InnerIterator it(m, j); it; ++it)
      cols[j].push_back({static_cast<std::uint64_t>(it.row()), it.value()});
  auto orc = from_columns(cols, h.dimension());
  if (orc.sparsity > h.column_sparsity_bound())
    throw ContractError("build_oracles: column sparsity " + std::to_string(orc.sparsity) +
                        " exceeds the structural bound " + std::to_string(h.column_sparsity_bound()));
  return orc;
}

namespace {

using Sp = Eigen::SparseMatrix<std::complex<double>, Eigen::ColMajor, std::int64_t>;

Sp sparse_encoding(const SparseAccessOracle &orc, unsigned max_qubits) {
  const unsigned q = orc.total_qubits();
  if (q > max_qubits)
    throw CapacityError("assemble_dense_encoding: " + std::to_string(q) + " qubits exceed the cap of " +
                        std::to_string(max_qubits));
  const unsigned ls = orc.index_bits(), wc = orc.width + 1;
  const std::uint64_t dim_l = std::uint64_t{1} << ls, dim_c = std::uint64_t{1} << wc;
  const std::uint64_t padded = std::uint64_t{1} << orc.width;
  const std::uint64_t total = std::uint64_t{1} << q;

  // bit offsets, I lowest
  const unsigned off_k = wc, off_c = wc + ls, off_l = 2 * wc + ls, off_b = 2 * wc + 2 * ls, off_a = off_b + 1;
  auto pack = [&](std::uint64_t a, std::uint64_t b, std::uint64_t l, std::uint64_t c, std::uint64_t k,
                  std::uint64_t i) {
    return (a << off_a) | (b << off_b) | (l << off_l) | (c << off_c) | (k << off_k) | i;
  };

  // Householder reflection sending |0> to the uniform state over s slots
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(dim_l, dim_l);
  if (orc.sparsity > 1) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim_l);
    v.head(orc.sparsity).setConstant(1.0 / std::sqrt(static_cast<double>(orc.sparsity)));
    Eigen::VectorXd u = Eigen::VectorXd::Unit(dim_l, 0) - v;
    d -= 2.0 * u * u.transpose() / u.squaredNorm();
  }
  auto column_of = [&](std::uint64_t i, std::uint64_t l) -> std::uint64_t {
    if (i >= padded) return i;
    if (l >= orc.sparsity) return i + padded;
    return orc.columns[i][l];
  };

  std::vector<Eigen::Triplet<std::complex<double>, std::int64_t>> trip;
  for (std::uint64_t col = 0; col < total; ++col) {
    const std::uint64_t i = col & (dim_c - 1);
    const std::uint64_t k0 = (col >> off_k) & (dim_l - 1);
    const std::uint64_t c0 = (col >> off_c) & (dim_c - 1);
    const std::uint64_t l0 = (col >> off_l) & (dim_l - 1);
    const std::uint64_t b0 = (col >> off_b) & 1u;
    const std::uint64_t a0 = (col >> off_a) & 1u;
    for (std::uint64_t l = 0; l < dim_l; ++l) {
      const double dl = d(l, l0);
      if (dl == 0.0) continue;
      const auto f = orc.amplitude(i, l);
      const double g = std::sqrt(std::max(0.0, 1.0 - std::norm(f)));
      const std::complex<double> to0 = b0 == 0 ? f : std::complex<double>(-g);
      const std::complex<double> to1 = b0 == 0 ? std::complex<double>(g) : std::conj(f);
      const std::uint64_t c = c0 ^ column_of(i, l);
      for (std::uint64_t k = 0; k < dim_l; ++k) {
        const double dk = d(k, k0);
        if (dk == 0.0) continue;
        if (to0 != 0.0) trip.emplace_back(pack(a0, 0, l, c, k, i), col, dl * dk * to0);
        if (to1 != 0.0) trip.emplace_back(pack(a0, 1, l, c, k, i), col, dl * dk * to1);
      }
    }
  }
  Sp v(total, total);
  v.setFromTriplets(trip.begin(), trip.end());

  // SWAP: a<->b, L<->K, C<->I is a row permutation of V
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> perm(total);
  for (std::uint64_t r = 0; r < total; ++r) {
    const std::uint64_t i = r & (dim_c - 1), k = (r >> off_k) & (dim_l - 1), c = (r >> off_c) & (dim_c - 1);
    const std::uint64_t l = (r >> off_l) & (dim_l - 1), b = (r >> off_b) & 1u, a = (r >> off_a) & 1u;
    perm[r] = static_cast<std::int64_t>(pack(b, a, k, i, l, c));
  }
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, std::int64_t> swap(perm);
  Sp sv = swap * v;
  return Sp(Sp(v.adjoint()) * sv);
}

} // namespace

Eigen::MatrixXcd assemble_dense_encoding(const SparseAccessOracle &orc, unsigned max_qubits) {
  return Eigen::MatrixXcd(sparse_encoding(orc, max_qubits));
}

BlockReport verify_block(const SparseAccessOracle &orc, const Eigen::MatrixXcd &a) {
  if (static_cast<std::size_t>(a.rows()) != orc.dimension || a.rows() != a.cols())
    throw ContractError("verify_block: matrix size differs from the oracle dimension");
  const Sp u = sparse_encoding(orc, 12);
  BlockReport r;
  r.normalization = static_cast<double>(orc.sparsity * orc.sparsity) * orc.max_entry;
  Sp id(u.rows(), u.cols());
  id.setIdentity();
  const Sp defect = Sp(Sp(u.adjoint()) * u) - id;
  for (Eigen::Index j = 0; j < defect.outerSize(); ++j)
    for (Sp::InnerIterator it(defect, j); it; ++it) r.unitarity_defect = std::max(r.unitarity_defect, std::abs(it.value()));
  if (r.unitarity_defect > 1e-10) throw NumericalError("verify_block: encoding is not unitary");
  const Eigen::Index n = static_cast<Eigen::Index>(orc.dimension);
  const Eigen::MatrixXcd block = Eigen::MatrixXcd(u.topLeftCorner(n, n));
  r.max_deviation = (block - a / r.normalization).cwiseAbs().maxCoeff();
  return r;
}

Eigen::MatrixXcd random_sparse_hermitian(std::mt19937_64 &rng, std::size_t dim, std::size_t max_sparsity) {
  if (dim < 2 || max_sparsity < 1 || max_sparsity > 2)
    throw ParameterError("random_sparse_hermitian: need dim >= 2 and sparsity 1 or 2");
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto entry = [&] { return std::complex<double>(u(rng), u(rng)); };
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  std::vector<Eigen::Index> perm(dim);
  for (std::size_t k = 0; k < dim; ++k) perm[k] = static_cast<Eigen::Index>(k);
  std::shuffle(perm.begin(), perm.end(), rng);
  const int shape = max_sparsity == 1 ? static_cast<int>(rng() % 2) : 2 + static_cast<int>(rng() % 2);
  switch (shape) {
  case 0: // diagonal
    for (Eigen::Index k = 0; k < n; ++k) a(k, k) = std::abs(u(rng));
    break;
  case 1:
  case 2: // disjoint pairs, plus a diagonal when two entries per column are allowed
    for (std::size_t k = 0; k + 1 < dim; k += 2) {
      const auto z = entry();
      a(perm[k], perm[k + 1]) = z;
      a(perm[k + 1], perm[k]) = std::conj(z);
    }
    if (shape == 2)
      for (Eigen::Index k = 0; k < n; ++k) a(k, k) = std::abs(u(rng));
    break;
  default: // one cycle through all indices, zero diagonal
    for (std::size_t k = 0; k < dim; ++k) {
      const auto i = perm[k], j = perm[(k + 1) % dim];
      if (dim == 2 && k == 1) break;
      const auto z = entry();
      a(i, j) = z;
      a(j, i) = std::conj(z);
    }
  }
  return a;
}

BlockSuiteReport verify_random_blocks(std::uint64_t seed, std::size_t count, std::size_t dim, std::size_t max_sparsity) {
  std::mt19937_64 rng(seed);
  BlockSuiteReport r;
  for (std::size_t k = 0; k < count; ++k) {
    const auto a = random_sparse_hermitian(rng, dim, max_sparsity);
    const auto rep = verify_block(build_oracles(a), a);
    r.worst_deviation = std::max(r.worst_deviation, rep.max_deviation);
    r.worst_unitarity_defect = std::max(r.worst_unitarity_defect, rep.unitarity_defect);
    ++r.instances;
  }
  return r;
}

OdeSystem tiny_test_system() {
  OdeSystem sys;
  sys.variable_count = 3;
  sys.interactions.push_back({{0, 1}, {0.7, -0.7}});
  sys.interactions.push_back({{1, 2}, {0.4, -0.4}});
  sys.incidence_bound = 2;
  sys.degree_bound = 3;
  return sys;
}

} // namespace kvn
