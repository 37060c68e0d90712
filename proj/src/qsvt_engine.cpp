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

#include "kvn/qsvt_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kvn/errors.hpp"

namespace kvn {

std::vector<double> bessel_j_sequence(double x, unsigned nmax) {
  if (!std::isfinite(x)) throw ParameterError("bessel_j_sequence: non-finite argument");
  std::vector<double> j(nmax + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  const bool negative = x < 0.0;
  const double ax = std::abs(x);
  const auto top = static_cast<unsigned>(std::max<double>(nmax, ax));
  unsigned start = top + 20 + static_cast<unsigned>(std::sqrt(40.0 * (top + 1)));
  start += start & 1u;

  std::vector<double> seq(start + 2, 0.0);
  seq[start + 1] = 0.0;
  seq[start] = 1e-300;
  for (unsigned k = start; k >= 1; --k) {
    seq[k - 1] = 2.0 * k / ax * seq[k] - seq[k + 1];
    if (std::abs(seq[k - 1]) > 1e250) {
      for (unsigned i = k - 1; i <= start + 1; ++i) seq[i] *= 1e-250;
    }
  }
  // J_0 + 2 sum_k J_2k = 1
  double norm = seq[0];
  for (unsigned k = 2; k <= start; k += 2) norm += 2.0 * seq[k];
  for (unsigned k = 0; k <= nmax; ++k) {
    j[k] = seq[k] / norm;
    if (negative && (k & 1u)) j[k] = -j[k];
  }
  return j;
}

QsvtPlan jacobi_anger_coefficients(double tau, unsigned truncation) {
  if (!std::isfinite(tau)) throw ParameterError("jacobi_anger_coefficients: non-finite tau");
  const auto j = bessel_j_sequence(tau, 2 * truncation + 1);
  QsvtPlan plan;
  plan.tau = tau;
  plan.truncation = truncation;
  plan.cos_coefficients.resize(truncation + 1);
  plan.sin_coefficients.resize(truncation + 1);
  plan.cos_coefficients[0] = j[0];
  for (unsigned k = 1; k <= truncation; ++k) plan.cos_coefficients[k] = 2.0 * ((k & 1u) ? -1.0 : 1.0) * j[2 * k];
  for (unsigned k = 0; k <= truncation; ++k)
    plan.sin_coefficients[k] = 2.0 * ((k & 1u) ? -1.0 : 1.0) * j[2 * k + 1];
  return plan;
}

ScalarPair evaluate_plan(const QsvtPlan &plan, double x) {
  double t_prev = 1.0, t_cur = x;
  ScalarPair r{plan.cos_coefficients[0], plan.sin_coefficients[0] * x};
  const unsigned degree = 2 * plan.truncation + 1;
  for (unsigned k = 2; k <= degree; ++k) {
    const double t_next = 2.0 * x * t_cur - t_prev;
    t_prev = t_cur;
    t_cur = t_next;
    if (k & 1u) r.sin_value += plan.sin_coefficients[(k - 1) / 2] * t_cur;
    else r.cos_value += plan.cos_coefficients[k / 2] * t_cur;
  }
  return r;
}

Eigen::VectorXcd chebyshev_apply(const MatVec &h, double spectral_norm, double alpha, const Eigen::VectorXcd &psi,
                                 const QsvtPlan &plan) {
  if (!(alpha > 0.0) && spectral_norm > 0.0) throw SpectralLeakError("chebyshev_apply: normalization must be positive");
  if (spectral_norm > 0.0 && alpha < spectral_norm * (1.0 - 1e-6))
    throw SpectralLeakError("chebyshev_apply: alpha " + std::to_string(alpha) + " is below the spectral norm " +
                            std::to_string(spectral_norm));
  if (plan.cos_coefficients.size() != plan.truncation + 1 || plan.sin_coefficients.size() != plan.truncation + 1)
    throw ContractError("chebyshev_apply: malformed plan");
  const std::complex<double> minus_i(0.0, -1.0);
  const double inv = alpha > 0.0 ? 1.0 / alpha : 0.0;

  Eigen::VectorXcd prev = psi, cur(psi.size()), next(psi.size());
  h(psi, cur);
  cur *= inv;
  Eigen::VectorXcd out = plan.cos_coefficients[0] * psi + minus_i * plan.sin_coefficients[0] * cur;
  const unsigned degree = 2 * plan.truncation + 1;
  for (unsigned k = 2; k <= degree; ++k) {
    h(cur, next);
    next = (2.0 * inv) * next - prev;
    std::swap(prev, cur);
    std::swap(cur, next);
    if (k & 1u) out += (minus_i * plan.sin_coefficients[(k - 1) / 2]) * cur;
    else out += plan.cos_coefficients[k / 2] * cur;
  }
  return out;
}

KvnState chebyshev_apply(const SparseHamiltonian &h, double alpha, const KvnState &psi, const QsvtPlan &plan) {
  if (psi.dimension() != h.dimension()) throw ContractError("chebyshev_apply: state and operator sizes differ");
  const double spec = h.nonzeros() ? h.spectral().value : 0.0;
  KvnState out{psi.basis, {}, psi.lambda};
  out.amplitudes = chebyshev_apply([&](const Eigen::VectorXcd &in, Eigen::VectorXcd &o) { h.apply(in, o); }, spec,
                                   alpha, psi.amplitudes, plan);
  return out;
}

KvnState evolve_qsvt(const SparseHamiltonian &h, const KvnState &psi0, std::size_t steps, const QsvtPlan &plan,
                     const QsvtOptions &opts) {
  if (!(plan.alpha > 0.0)) throw ContractError("evolve_qsvt: plan is not bound to a normalization");
  KvnState psi = psi0;
  const double dt = plan.time_step();
  if (opts.observer) opts.observer(0, 0.0, psi, psi.amplitudes.norm());
  for (std::size_t s = 1; s <= steps; ++s) {
    psi = chebyshev_apply(h, plan.alpha, psi, plan);
    const double norm = psi.amplitudes.norm();
    if (!std::isfinite(norm)) throw DivergenceError("evolve_qsvt: non-finite state at step " + std::to_string(s));
    if (opts.renormalize) {
      if (norm == 0.0) throw DivergenceError("evolve_qsvt: state vanished at step " + std::to_string(s));
      psi.amplitudes /= norm;
    } else if (norm < 1e-6) {
      throw DivergenceError("evolve_qsvt: norm collapsed to " + std::to_string(norm) + " at step " +
                            std::to_string(s));
    }
    if (opts.observer) opts.observer(s, static_cast<double>(s) * dt, psi, norm);
  }
  return psi;
}

std::vector<TrajectoryPoint> evolve_qsvt_trajectory(const SparseHamiltonian &h, const KvnState &psi0,
                                                    std::size_t steps, const QsvtPlan &plan, bool renormalize) {
  std::vector<TrajectoryPoint> traj;
  traj.reserve(steps + 1);
  QsvtOptions opts;
  opts.renormalize = renormalize;
  opts.observer = [&](std::size_t s, double t, const KvnState &psi, double norm) {
    traj.push_back({s, t, psi, norm});
  };
  evolve_qsvt(h, psi0, steps, plan, opts);
  return traj;
}

KvnState evolve_qsvt_to(const SparseHamiltonian &h, const KvnState &psi0, double t_final, const QsvtPlan &plan,
                        bool renormalize) {
  if (!(t_final >= 0.0)) throw ParameterError("evolve_qsvt_to: negative time");
  const double dt = plan.time_step();
  auto whole = static_cast<std::size_t>(std::floor(t_final / dt + 1e-12));
  QsvtOptions opts;
  opts.renormalize = renormalize;
  KvnState psi = evolve_qsvt(h, psi0, whole, plan, opts);
  const double rest = t_final - static_cast<double>(whole) * dt;
  if (rest > 1e-14 * std::max(1.0, t_final)) {
    auto partial = jacobi_anger_coefficients(plan.tau * rest / dt, plan.truncation);
    partial.alpha = plan.alpha;
    psi = evolve_qsvt(h, psi, 1, partial, opts);
  }
  return psi;
}

double qsvt_error_bound(double alpha, double t, unsigned truncation) {
  const double at = std::abs(alpha * t);
  const double r = truncation;
  return 1.25 * std::pow(std::numbers::e * at / (4.0 * (r + 1.0)), 2.0 * r + 2.0) +
         1.25 * std::pow(std::numbers::e * at / (2.0 * (2.0 * r + 3.0)), 2.0 * r + 3.0);
}

TruncationBound kvn_truncation_bound(double c_const, double nx, double lambda, unsigned order) {
  if (order < 1) throw ParameterError("kvn_truncation_bound: order must be >= 1");
  const unsigned e = (order - 1 + 2) / 3;
  const double ed = e;
  return {std::pow(c_const * nx / lambda, ed) + 2.0 / (std::pow(6.0, ed) * std::tgamma(ed + 1.0))};
}

TruncationBound kvn_truncation_bound(double c_const, double nx, double lambda, unsigned order, double incidence,
                                     double t) {
  auto b = kvn_truncation_bound(c_const, nx, lambda, order);
  b.floor_checked = true;
  b.below_floor = lambda < lambda_floor(c_const, nx, incidence, t, order);
  return b;
}

StabilityReport stability_check(double c_const, double incidence, unsigned order, double lambda, unsigned truncation,
                                double nx, double t) {
  StabilityReport r;
  const double m = order;
  r.rescale_limit = std::numbers::sqrt2 * lambda / (27.0 * c_const * c_const * nx * incidence * m * m * m);
  r.polynomial_limit =
      std::numbers::sqrt2 * (truncation + 1.0) / (3.0 * std::numbers::e * c_const * incidence * std::pow(m, 2.5));
  const double limit = std::min(r.rescale_limit, r.polynomial_limit);
  r.binding = r.rescale_limit <= r.polynomial_limit ? BindingTerm::rescale : BindingTerm::polynomial;
  const double lhs = nx * t;
  if (lhs <= 0.0) {
    r.binding = BindingTerm::none;
    return r;
  }
  r.margin = limit / lhs;
  r.satisfied = lhs < limit;
  return r;
}

double lambda_floor(double c_const, double nx, double incidence, double t, unsigned order) {
  const double m = order;
  return 27.0 * (c_const * nx) * (c_const * nx) * incidence * t * m * m * m / std::numbers::sqrt2;
}

double analytic_alpha(double c_const, double nx, double incidence, unsigned order) {
  return std::pow(2.0, 1.5) * 3.0 * c_const * nx * incidence * std::pow(static_cast<double>(order), 2.5);
}

} // namespace kvn
