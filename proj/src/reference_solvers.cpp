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

#include "kvn/reference_solvers.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "kvn/errors.hpp"

namespace kvn {

namespace {

bool use_dense(const ExpmConfig &cfg, std::size_t dim) {
  switch (cfg.method) {
  case ExpmMethod::dense_eigen:
    if (dim > cfg.dense_limit)
      throw CapacityError("evolve_expm: dense eigendecomposition refused above dimension " +
                          std::to_string(cfg.dense_limit));
    return true;
  case ExpmMethod::krylov: return false;
  case ExpmMethod::automatic: return dim <= cfg.dense_limit;
  }
  return false;
}

} // namespace

DensePropagator::DensePropagator(const Eigen::MatrixXcd &h) { factor(h); }

DensePropagator::DensePropagator(const SparseHamiltonian &h, std::size_t dense_limit) {
  if (h.dimension() > dense_limit)
    throw CapacityError("DensePropagator: dimension " + std::to_string(h.dimension()) + " above the dense limit");
  factor(Eigen::MatrixXcd(h.matrix()));
}

void DensePropagator::factor(const Eigen::MatrixXcd &h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("DensePropagator: eigendecomposition failed");
  values_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

Eigen::VectorXcd DensePropagator::apply(const Eigen::VectorXcd &psi, double t) const {
  if (psi.size() != vectors_.rows()) throw ContractError("DensePropagator: vector length mismatch");
  Eigen::VectorXcd c = vectors_.adjoint() * psi;
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -values_[k] * t);
  return vectors_ * c;
}

Eigen::VectorXcd krylov_expv(const MatVec &h, double scale, const Eigen::VectorXcd &psi, double t, int krylov_dim,
                             double tol) {
  const Eigen::Index n = psi.size();
  Eigen::VectorXcd v = psi;
  if (t == 0.0 || n == 0) return v;
  const double sign = t < 0.0 ? -1.0 : 1.0;
  const double total = std::abs(t);
  const int kmax = static_cast<int>(std::min<Eigen::Index>(krylov_dim, n));
  double done = 0.0;
  double step = scale > 0.0 ? std::min(total, 0.5 * kmax / scale) : total;
  Eigen::MatrixXcd basis(n, kmax + 1);
  Eigen::VectorXcd w(n);
  std::size_t substeps = 0;

  while (done < total) {
    const double beta0 = v.norm();
    if (beta0 == 0.0) return v;
    basis.col(0) = v / beta0;
    std::vector<double> a, b;
    int k = 0;
    bool happy = false;
    for (; k < kmax; ++k) {
      h(basis.col(k), w);
      const double ak = basis.col(k).dot(w).real();
      a.push_back(ak);
      for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).adjoint() * w);
      const double bk = w.norm();
      b.push_back(bk);
      if (bk <= 1e-13 * std::max({std::abs(ak), scale, 1e-300})) {
        happy = true;
        ++k;
        break;
      }
      basis.col(k + 1) = w / bk;
    }
    const int m = k;
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(a.data(), m);
    Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(b.data(), m - 1)) : Eigen::VectorXd();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd &q = tri.eigenvectors();
    const Eigen::VectorXd &theta = tri.eigenvalues();
    const double beta_last = happy ? 0.0 : b[m - 1];

    for (;;) {
      step = std::min(step, total - done);
      Eigen::VectorXcd c(m);
      for (int i = 0; i < m; ++i) c[i] = std::polar(q(0, i), -sign * theta[i] * step);
      const Eigen::VectorXcd y = q * c;
      const double err = beta0 * beta_last * std::abs(y[m - 1]);
      const double allowed = tol * step / total;
      if (err <= allowed || happy) {
        v = beta0 * (basis.leftCols(m) * y);
        done += step;
        const double grow = err > 0.0 ? 0.9 * std::pow(allowed / err, 1.0 / m) : 2.0;
        step *= std::clamp(grow, 0.2, 2.0);
        break;
      }
      step *= std::clamp(0.9 * std::pow(allowed / err, 1.0 / m), 0.1, 0.5);
      if (step < 1e-14 * total)
        throw ToleranceError("krylov_expv: substep underflow with residual " + std::to_string(err), err);
    }
    if (++substeps > 10000000) throw ToleranceError("krylov_expv: substep limit reached", 0.0);
  }
  return v;
}

KvnState evolve_expm(const SparseHamiltonian &h, const KvnState &psi0, double t, const ExpmConfig &cfg) {
  if (psi0.dimension() != h.dimension()) throw ContractError("evolve_expm: state and operator sizes differ");
  KvnState out{psi0.basis, {}, psi0.lambda};
  if (use_dense(cfg, h.dimension())) {
    out.amplitudes = DensePropagator(h, cfg.dense_limit).apply(psi0.amplitudes, t);
  } else {
    out.amplitudes = krylov_expv([&](const Eigen::VectorXcd &in, Eigen::VectorXcd &o) { h.apply(in, o); },
                                 h.max_column_sum(), psi0.amplitudes, t, cfg.krylov_dimension, cfg.tolerance);
  }
  return out;
}

std::vector<KvnState> evolve_expm_series(const SparseHamiltonian &h, const KvnState &psi0,
                                         std::span<const double> times, const ExpmConfig &cfg) {
  if (psi0.dimension() != h.dimension()) throw ContractError("evolve_expm_series: state and operator sizes differ");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] < times[i - 1]) throw ContractError("evolve_expm_series: times must be ascending");
  std::vector<KvnState> out;
  out.reserve(times.size());
  if (use_dense(cfg, h.dimension())) {
    const DensePropagator prop(h, cfg.dense_limit);
    for (double t : times) out.push_back({psi0.basis, prop.apply(psi0.amplitudes, t), psi0.lambda});
    return out;
  }
  const MatVec mv = [&](const Eigen::VectorXcd &in, Eigen::VectorXcd &o) { h.apply(in, o); };
  Eigen::VectorXcd psi = psi0.amplitudes;
  double t_prev = 0.0;
  // the tolerance is spread over the intervals so the chain meets it overall
  const double per_interval = cfg.tolerance / std::max<std::size_t>(1, times.size());
  for (double t : times) {
    psi = krylov_expv(mv, h.max_column_sum(), psi, t - t_prev, cfg.krylov_dimension, per_interval);
    t_prev = t;
    out.push_back({psi0.basis, psi, psi0.lambda});
  }
  return out;
}

Rk4Result rk4_integrate(const OdeSystem &sys, std::span<const double> x0, double dt, std::size_t steps,
                        std::size_t store_every) {
  if (x0.size() != sys.variable_count) throw ContractError("rk4_integrate: state length mismatch");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("rk4_integrate: dt must be positive");
  if (store_every == 0) store_every = 1;
  const std::size_t n = x0.size();
  Rk4Result r;
  double norm0 = 0.0;
  for (double v : x0) norm0 += v * v;
  r.step_warning = dt * eta(sys, 1.0) * std::sqrt(norm0) > 0.5;

  std::vector<double> x(x0.begin(), x0.end()), k1(n), k2(n), k3(n), k4(n), tmp(n);
  r.times.push_back(0.0);
  r.states.push_back(x);
  for (std::size_t s = 1; s <= steps; ++s) {
    classical_rhs(sys, x, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    classical_rhs(sys, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    classical_rhs(sys, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
    classical_rhs(sys, tmp, k4);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(x[i])) throw DivergenceError("rk4_integrate: non-finite state at step " + std::to_string(s));
    }
    if (s % store_every == 0 || s == steps) {
      r.times.push_back(static_cast<double>(s) * dt);
      r.states.push_back(x);
    }
  }
  return r;
}

} // namespace kvn
