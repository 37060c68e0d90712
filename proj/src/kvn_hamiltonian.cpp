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

#include "kvn/kvn_hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

#include "kvn/errors.hpp"

namespace kvn {

std::optional<LadderResult> ladder_apply(std::span<const std::uint8_t> occ, std::size_t mode, LadderKind kind,
                                         unsigned cap) {
  if (mode >= occ.size()) throw ContractError("ladder_apply: mode out of range");
  LadderResult r{OccupancyVector(occ.begin(), occ.end()), 0.0};
  if (kind == LadderKind::annihilate) {
    if (occ[mode] == 0) return std::nullopt;
    r.amplitude = std::sqrt(static_cast<double>(occ[mode]));
    --r.occ[mode];
    return r;
  }
  if (total_occupation(occ) + 1 > cap || occ[mode] == 255) return std::nullopt;
  r.amplitude = std::sqrt(static_cast<double>(occ[mode]) + 1.0);
  ++r.occ[mode];
  return r;
}

double eta(const OdeSystem &sys, double lambda) {
  if (!(lambda >= 1.0)) throw ParameterError("eta: rescale parameter must be >= 1");
  double e = 0.0;
  for (const auto &it : sys.interactions) {
    const double scale = std::pow(lambda, static_cast<double>(it.vars.size()) - 2.0);
    for (double a : it.alpha) e = std::max(e, std::abs(a) / scale);
  }
  return e;
}

namespace {

struct Entry {
  std::int64_t row;
  double value; // imaginary part; H_{row,col} = i * value
};

// Generates the merged entries of one column of H_m. Only interactions that
// touch an occupied mode contribute: the pure-creation and pure-annihilation
// patterns of a term carry the factor sum_j alpha_{p->j} = 0 and vanish.
class ColumnGenerator {
public:
  ColumnGenerator(const OdeSystem &sys, const TruncatedFockBasis &basis, double lambda)
      : sys_(sys), basis_(basis), incidence_(sys.variable_count) {
    scaled_.reserve(sys.interactions.size());
    abs_sum_.reserve(sys.interactions.size());
    for (std::size_t i = 0; i < sys.interactions.size(); ++i) {
      const auto &it = sys.interactions[i];
      const double scale = std::pow(lambda, static_cast<double>(it.vars.size()) - 2.0);
      std::vector<double> a(it.alpha.size());
      double s = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        a[k] = it.alpha[k] / scale;
        s += std::abs(a[k]);
      }
      scaled_.push_back(std::move(a));
      abs_sum_.push_back(s);
      for (auto v : it.vars) incidence_[v].push_back(static_cast<std::uint32_t>(i));
    }
  }

  const std::vector<Entry> &column(BasisIndex col) {
    basis_.unrank_sparse(col, occupied_);
    unsigned total = 0;
    for (const auto &mc : occupied_) total += mc.count;

    touched_.clear();
    for (const auto &mc : occupied_)
      touched_.insert(touched_.end(), incidence_[mc.mode].begin(), incidence_[mc.mode].end());
    std::sort(touched_.begin(), touched_.end());
    touched_.erase(std::unique(touched_.begin(), touched_.end()), touched_.end());

    raw_.clear();
    for (auto id : touched_) emit(id, total);
    merge();
    return merged_;
  }

private:
  unsigned count_of(std::size_t mode) const {
    for (const auto &mc : occupied_)
      if (mc.mode == mode) return mc.count;
    return 0;
  }

  void emit(std::uint32_t id, unsigned total) {
    const auto &vars = sys_.interactions[id].vars;
    const auto &alpha = scaled_[id];
    const std::size_t s = vars.size();
    unsigned counts[8];
    for (std::size_t k = 0; k < s; ++k) counts[k] = count_of(vars[k]);
    const double norm = std::pow(0.5, 0.5 * static_cast<double>(s));
    const unsigned full = (1u << s) - 1;
    for (unsigned mask = 1; mask < full; ++mask) {
      int shift = 0;
      double amp = norm, coupling = 0.0;
      bool ok = true;
      for (std::size_t k = 0; k < s; ++k) {
        if (mask >> k & 1u) {
          amp *= std::sqrt(static_cast<double>(counts[k]) + 1.0);
          coupling += alpha[k];
          ++shift;
        } else {
          if (counts[k] == 0) {
            ok = false;
            break;
          }
          amp *= std::sqrt(static_cast<double>(counts[k]));
          coupling -= alpha[k];
          --shift;
        }
      }
      if (!ok || static_cast<int>(total) + shift > static_cast<int>(basis_.truncation_order())) continue;
      if (std::abs(coupling) <= 1e-13 * abs_sum_[id]) continue;

      // target occupancy: merge the ascending occupied list with the shifted legs
      target_.clear();
      std::size_t a = 0;
      for (std::size_t k = 0; k < s; ++k) {
        while (a < occupied_.size() && occupied_[a].mode < vars[k]) target_.push_back(occupied_[a++]);
        const unsigned n = counts[k] + ((mask >> k & 1u) ? 1u : 0u) - ((mask >> k & 1u) ? 0u : 1u);
        if (a < occupied_.size() && occupied_[a].mode == vars[k]) ++a;
        if (n > 0) target_.push_back({static_cast<std::uint32_t>(vars[k]), n});
      }
      while (a < occupied_.size()) target_.push_back(occupied_[a++]);
      const auto row = static_cast<std::int64_t>(basis_.rank_sparse(target_));
      raw_.push_back({row, amp * coupling, std::abs(amp * coupling)});
    }
  }

  void merge() {
    std::sort(raw_.begin(), raw_.end(), [](const Raw &x, const Raw &y) { return x.row < y.row; });
    merged_.clear();
    for (std::size_t i = 0; i < raw_.size();) {
      double sum = 0.0, mag = 0.0;
      std::size_t j = i;
      for (; j < raw_.size() && raw_[j].row == raw_[i].row; ++j) {
        sum += raw_[j].value;
        mag += raw_[j].magnitude;
      }
      if (std::abs(sum) > 1e-13 * mag) merged_.push_back({raw_[i].row, sum});
      i = j;
    }
  }

  struct Raw {
    std::int64_t row;
    double value;
    double magnitude;
  };

  const OdeSystem &sys_;
  const TruncatedFockBasis &basis_;
  std::vector<std::vector<std::uint32_t>> incidence_;
  std::vector<std::vector<double>> scaled_;
  std::vector<double> abs_sum_;
  std::vector<ModeCount> occupied_, target_;
  std::vector<std::uint32_t> touched_;
  std::vector<Raw> raw_;
  std::vector<Entry> merged_;
};

void check_inputs(const OdeSystem &sys, unsigned order, double lambda) {
  if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw ParameterError("assemble: rescale parameter must be >= 1");
  if (order < 1) throw ParameterError("assemble: truncation order must be >= 1");
  const auto report = validate_system(sys);
  if (!report.ok())
    throw ConfigurationError("assemble: system violates the solvability conditions: " +
                             report.violations.front().detail);
  for (const auto &it : sys.interactions)
    if (it.vars.size() > 8) throw ConfigurationError("assemble: interaction degree above 8");
}

template <class Fn> void parallel_for(BasisIndex n, unsigned threads, Fn fn) {
  if (threads <= 1 || n < 4096) {
    fn(0u, BasisIndex{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  const BasisIndex chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const BasisIndex lo = std::min<BasisIndex>(n, t * chunk), hi = std::min<BasisIndex>(n, lo + chunk);
    pool.emplace_back(fn, t, lo, hi);
  }
  for (auto &th : pool) th.join();
}

} // namespace

SparseHamiltonian::SparseHamiltonian(TruncatedFockBasis basis, SparseMatrixC matrix, double lambda, double eta,
                                     std::size_t column_bound)
    : basis_(std::move(basis)), matrix_(std::move(matrix)), lambda_(lambda), eta_(eta), column_bound_(column_bound) {
  if (static_cast<BasisIndex>(matrix_.cols()) != basis_.dimension() || matrix_.rows() != matrix_.cols())
    throw ContractError("SparseHamiltonian: matrix shape differs from basis dimension");
  matrix_.makeCompressed();
  double fro = 0.0;
  for (Eigen::Index c = 0; c < matrix_.outerSize(); ++c) {
    double col_sum = 0.0;
    std::size_t nnz = 0;
    for (SparseMatrixC::InnerIterator it(matrix_, c); it; ++it) {
      const double a = std::abs(it.value());
      max_entry_ = std::max(max_entry_, a);
      col_sum += a;
      fro += a * a;
      ++nnz;
    }
    max_col_sum_ = std::max(max_col_sum_, col_sum);
    max_col_nnz_ = std::max(max_col_nnz_, nnz);
  }
  frobenius_ = std::sqrt(fro);
}

const SpectralEstimate &SparseHamiltonian::spectral() const {
  if (!spectral_) spectral_ = spectral_norm_estimate(matrix_);
  return *spectral_;
}

void SparseHamiltonian::apply(const Eigen::VectorXcd &in, Eigen::VectorXcd &out) const {
  if (static_cast<std::size_t>(in.size()) != dimension()) throw ContractError("apply: vector length mismatch");
  out.noalias() = matrix_ * in;
}

SparseHamiltonian assemble(const OdeSystem &sys, unsigned order, double lambda, const AssemblyOptions &opts) {
  check_inputs(sys, order, lambda);
  TruncatedFockBasis basis(sys.variable_count, order);
  const BasisIndex dim = basis.dimension();
  const std::size_t column_bound = static_cast<std::size_t>(order) * sys.incidence_bound << sys.degree_bound;
  const double eta_value = eta(sys, lambda);

  // Even an empty operator needs one offset per column.
  if (static_cast<double>(dim) * 32.0 > static_cast<double>(opts.memory_cap_bytes))
    throw CapacityError("assemble: dimension " + std::to_string(dim) + " cannot fit in the memory cap");

  const unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::int64_t> outer(dim + 1, 0);
  std::vector<double> thread_max(threads, 0.0);
  parallel_for(dim, threads, [&](unsigned t, BasisIndex lo, BasisIndex hi) {
    ColumnGenerator gen(sys, basis, lambda);
    for (BasisIndex c = lo; c < hi; ++c) {
      const auto &col = gen.column(c);
      outer[c + 1] = static_cast<std::int64_t>(col.size());
      for (const auto &e : col) thread_max[t] = std::max(thread_max[t], std::abs(e.value));
    }
  });
  for (BasisIndex c = 0; c < dim; ++c) outer[c + 1] += outer[c];
  const auto nnz = outer[dim];
  const double bytes = static_cast<double>(nnz) * 24.0 + static_cast<double>(dim) * 8.0;
  if (bytes > static_cast<double>(opts.memory_cap_bytes))
    throw CapacityError("assemble: operator needs " + std::to_string(static_cast<long long>(bytes / 1048576.0)) +
                        " MiB, above the configured cap");
  const double a_max = *std::max_element(thread_max.begin(), thread_max.end());
  const double prune = 1e-15 * a_max;

  SparseMatrixC h(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  h.resizeNonZeros(nnz);
  auto *inner = h.innerIndexPtr();
  auto *values = h.valuePtr();
  std::vector<std::int64_t> filled(dim, 0);
  parallel_for(dim, threads, [&](unsigned, BasisIndex lo, BasisIndex hi) {
    ColumnGenerator gen(sys, basis, lambda);
    for (BasisIndex c = lo; c < hi; ++c) {
      auto pos = outer[c];
      for (const auto &e : gen.column(c)) {
        if (std::abs(e.value) < prune) continue;
        inner[pos] = e.row;
        values[pos] = Complex(0.0, e.value);
        ++pos;
      }
      filled[c] = pos - outer[c];
    }
  });
  // compact away pruned slots
  std::int64_t write = 0;
  for (BasisIndex c = 0; c < dim; ++c) {
    const auto start = outer[c];
    outer[c] = write;
    for (std::int64_t k = 0; k < filled[c]; ++k, ++write) {
      inner[write] = inner[start + k];
      values[write] = values[start + k];
    }
  }
  outer[dim] = write;
  std::copy(outer.begin(), outer.end(), h.outerIndexPtr());
  h.data().resize(write);
  return SparseHamiltonian(basis, std::move(h), lambda, eta_value, column_bound);
}

double streamed_frobenius_norm(const OdeSystem &sys, unsigned order, double lambda) {
  check_inputs(sys, order, lambda);
  TruncatedFockBasis basis(sys.variable_count, order);
  ColumnGenerator gen(sys, basis, lambda);
  double sum = 0.0;
  for (BasisIndex c = 0; c < basis.dimension(); ++c)
    for (const auto &e : gen.column(c)) sum += e.value * e.value;
  return std::sqrt(sum);
}

SpectralEstimate spectral_norm_estimate(const SparseMatrixC &h, double rtol, int max_iterations) {
  if (h.rows() != h.cols()) throw ContractError("spectral_norm_estimate: matrix is not square");
  const Eigen::Index n = h.rows();
  SpectralEstimate est;
  double fro = 0.0, col_max = 0.0;
  for (Eigen::Index c = 0; c < h.outerSize(); ++c) {
    double s = 0.0;
    for (SparseMatrixC::InnerIterator it(h, c); it; ++it) {
      s += std::abs(it.value());
      fro += std::norm(it.value());
    }
    col_max = std::max(col_max, s);
  }
  est.upper = std::min(std::sqrt(fro), col_max);
  if (n == 0 || est.upper == 0.0) return est;

  // Reorthogonalized Lanczos; the basis is capped at ~512 MiB.
  const Eigen::Index mem_cap = std::max<Eigen::Index>(8, (Eigen::Index{512} << 20) / (16 * n));
  const Eigen::Index kmax = std::min<Eigen::Index>({static_cast<Eigen::Index>(max_iterations), n, mem_cap});
  Eigen::MatrixXcd v(n, kmax);
  std::mt19937_64 rng(0x6b766e);
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd q(n);
  for (Eigen::Index i = 0; i < n; ++i) q[i] = Complex(gauss(rng), gauss(rng));
  q.normalize();
  std::vector<double> alpha, beta;
  Eigen::VectorXcd w(n);
  double theta_prev = 0.0;
  for (Eigen::Index k = 0; k < kmax; ++k) {
    v.col(k) = q;
    w.noalias() = h * q;
    const double a = q.dot(w).real();
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass) w -= v.leftCols(k + 1) * (v.leftCols(k + 1).adjoint() * w);
    const double b = w.norm();

    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1)) : Eigen::VectorXd();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const auto &evals = tri.eigenvalues();
    Eigen::Index best = std::abs(evals[0]) >= std::abs(evals[m - 1]) ? 0 : m - 1;
    const double theta = std::abs(evals[best]);
    const double resid = b * std::abs(tri.eigenvectors()(m - 1, best));
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i)
      if (i != best) gap = std::min(gap, std::abs(evals[best] - evals[i]));
    est.lower = std::max(est.lower, theta);
    est.iterations = static_cast<int>(k + 1);
    const bool invariant = b <= 1e-13 * std::max(theta, est.upper);
    const bool converged =
        m > 1 && (resid <= rtol * theta || (std::isfinite(gap) && gap > 0 && resid * resid / gap <= rtol * theta));
    const bool stalled = k > 10 && std::abs(theta - theta_prev) <= 1e-3 * rtol * theta;
    if (invariant || converged || stalled || k + 1 == n) {
      est.value = est.lower;
      return est;
    }
    theta_prev = theta;
    beta.push_back(b);
    q = w / b;
  }
  throw EstimationError("spectral_norm_estimate: no convergence after " + std::to_string(est.iterations) +
                            " Lanczos steps",
                        est.lower, est.upper);
}

double hermiticity_defect(const SparseMatrixC &h) {
  if (h.rows() != h.cols()) throw ContractError("hermiticity_defect: matrix is not square");
  SparseMatrixC diff = h - SparseMatrixC(h.adjoint());
  double d = 0.0;
  for (Eigen::Index c = 0; c < diff.outerSize(); ++c)
    for (SparseMatrixC::InnerIterator it(diff, c); it; ++it) d = std::max(d, std::abs(it.value()));
  return d;
}

void write_matrix_market(std::ostream &os, const SparseMatrixC &h) {
  os << "%%MatrixMarket matrix coordinate complex general\n";
  os << h.rows() << ' ' << h.cols() << ' ' << h.nonZeros() << '\n';
  os << std::setprecision(17);
  for (Eigen::Index c = 0; c < h.outerSize(); ++c)
    for (SparseMatrixC::InnerIterator it(h, c); it; ++it)
      os << it.row() + 1 << ' ' << c + 1 << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
  if (!os) throw IoError("write_matrix_market: stream failure");
}

SparseMatrixC read_matrix_market(std::istream &is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("%%MatrixMarket matrix coordinate complex general", 0) != 0)
    throw IoError("read_matrix_market: expected a complex general coordinate header");
  while (std::getline(is, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream dims(line);
  long long rows = 0, cols = 0, nnz = 0;
  if (!(dims >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
    throw IoError("read_matrix_market: malformed size line");
  std::vector<Eigen::Triplet<Complex, std::int64_t>> trip;
  trip.reserve(static_cast<std::size_t>(nnz));
  for (long long k = 0; k < nnz; ++k) {
    long long i, j;
    double re, im;
    if (!(is >> i >> j >> re >> im) || i < 1 || j < 1 || i > rows || j > cols)
      throw IoError("read_matrix_market: malformed entry " + std::to_string(k + 1));
    trip.emplace_back(i - 1, j - 1, Complex(re, im));
  }
  SparseMatrixC h(rows, cols);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

} // namespace kvn
