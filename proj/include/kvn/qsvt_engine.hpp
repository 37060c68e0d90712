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

// Matrix-level emulation of QSVT Hamiltonian simulation. One step applies
//
//     P_R^cos(H/alpha) - i P_R^sin(H/alpha)  ~  exp(-i H tau/alpha)
//
// where the two polynomials are the Jacobi-Anger series truncated after the
// Chebyshev terms of degree 2R and 2R+1.

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "kvn/kvn_hamiltonian.hpp"
#include "kvn/kvn_state.hpp"

namespace kvn {

/// Bessel functions J_0..J_nmax at x by normalized backward recurrence.
std::vector<double> bessel_j_sequence(double x, unsigned nmax);

struct QsvtPlan {
  double tau = 0.0;
  unsigned truncation = 0; ///< R
  double alpha = 0.0;      ///< normalization of H; 0 until bound to an operator
  std::vector<double> cos_coefficients; ///< J_0, 2(-1)^k J_2k for k = 1..R
  std::vector<double> sin_coefficients; ///< 2(-1)^k J_{2k+1} for k = 0..R

  double time_step() const { return tau / alpha; }
};

QsvtPlan jacobi_anger_coefficients(double tau, unsigned truncation);

struct ScalarPair {
  double cos_value;
  double sin_value;
};
/// (P_R^cos(x), P_R^sin(x)) on scalar x in [-1, 1].
ScalarPair evaluate_plan(const QsvtPlan &plan, double x);

using MatVec = std::function<void(const Eigen::VectorXcd &, Eigen::VectorXcd &)>;

/// Applies the step polynomial of H/alpha to psi with 2R+1 products.
/// Throws SpectralLeakError if alpha < spectral_norm (1 - 1e-6).
Eigen::VectorXcd chebyshev_apply(const MatVec &h, double spectral_norm, double alpha, const Eigen::VectorXcd &psi,
                                 const QsvtPlan &plan);
KvnState chebyshev_apply(const SparseHamiltonian &h, double alpha, const KvnState &psi, const QsvtPlan &plan);

struct QsvtOptions {
  bool renormalize = true;
  /// Called after every step with (step, time, state, norm before renormalization).
  std::function<void(std::size_t, double, const KvnState &, double)> observer;
};

/// N_t steps of length tau/alpha; step 0 is reported to the observer as well.
KvnState evolve_qsvt(const SparseHamiltonian &h, const KvnState &psi0, std::size_t steps, const QsvtPlan &plan,
                     const QsvtOptions &opts = {});

struct TrajectoryPoint {
  std::size_t step;
  double time;
  KvnState state;
  double norm_before;
};
std::vector<TrajectoryPoint> evolve_qsvt_trajectory(const SparseHamiltonian &h, const KvnState &psi0,
                                                    std::size_t steps, const QsvtPlan &plan, bool renormalize = true);

/// Evolves to real time `t_final` in uniform steps; a partial final step is
/// taken with a proportionally reduced tau.
KvnState evolve_qsvt_to(const SparseHamiltonian &h, const KvnState &psi0, double t_final, const QsvtPlan &plan,
                        bool renormalize = true);

/// Per-step polynomial error bound for alpha T, truncation R.
double qsvt_error_bound(double alpha, double t, unsigned truncation);

struct TruncationBound {
  double value;
  bool floor_checked = false;
  bool below_floor = false; ///< Lambda under lambda_floor: the bound is outside its validity regime
};
TruncationBound kvn_truncation_bound(double c_const, double nx, double lambda, unsigned order);
TruncationBound kvn_truncation_bound(double c_const, double nx, double lambda, unsigned order, double incidence,
                                     double t);

enum class BindingTerm { none, rescale, polynomial };

struct StabilityReport {
  bool satisfied = true;
  double margin = std::numeric_limits<double>::infinity(); ///< bound / (N_x T)
  BindingTerm binding = BindingTerm::none;
  double rescale_limit = 0.0;
  double polynomial_limit = 0.0;
};

StabilityReport stability_check(double c_const, double incidence, unsigned order, double lambda, unsigned truncation,
                                double nx, double t);

/// 27 (C N_x)^2 c T m^3 / sqrt(2).
double lambda_floor(double c_const, double nx, double incidence, double t, unsigned order);

/// Worst-case block-encoding normalization 2^{3/2} 3 C N_x c m^{5/2}.
double analytic_alpha(double c_const, double nx, double incidence, unsigned order);

} // namespace kvn
