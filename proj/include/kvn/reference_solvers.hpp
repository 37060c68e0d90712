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

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kvn/emhd_model.hpp"
#include "kvn/kvn_hamiltonian.hpp"
#include "kvn/kvn_state.hpp"
#include "kvn/qsvt_engine.hpp"

namespace kvn {

enum class ExpmMethod { automatic, dense_eigen, krylov };

struct ExpmConfig {
  ExpmMethod method = ExpmMethod::automatic;
  std::size_t dense_limit = 1500; ///< dense eigendecomposition only up to this dimension
  int krylov_dimension = 30;
  double tolerance = 1e-10;
};

/// exp(-i H t) for a Hermitian H held as an eigendecomposition; reusable
/// across many evaluation times.
class DensePropagator {
public:
  explicit DensePropagator(const Eigen::MatrixXcd &h);
  explicit DensePropagator(const SparseHamiltonian &h, std::size_t dense_limit = 1500);

  Eigen::VectorXcd apply(const Eigen::VectorXcd &psi, double t) const;
  const Eigen::VectorXd &eigenvalues() const noexcept { return values_; }

private:
  void factor(const Eigen::MatrixXcd &h);
  Eigen::VectorXd values_;
  Eigen::MatrixXcd vectors_;
};

/// exp(-i H t) psi by Lanczos with adaptive substeps. `scale` is any upper
/// bound on ||H|| and only seeds the first substep.
Eigen::VectorXcd krylov_expv(const MatVec &h, double scale, const Eigen::VectorXcd &psi, double t, int krylov_dim,
                             double tol);

KvnState evolve_expm(const SparseHamiltonian &h, const KvnState &psi0, double t, const ExpmConfig &cfg = {});

/// Evaluates exp(-i H t_k) psi0 at the requested ascending times.
/// The dense path factors once; the Krylov path chains consecutive intervals.
std::vector<KvnState> evolve_expm_series(const SparseHamiltonian &h, const KvnState &psi0,
                                         std::span<const double> times, const ExpmConfig &cfg = {});

struct Rk4Result {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  bool step_warning = false; ///< dt eta ||x0|| exceeded 0.5
};

/// Classic RK4 on classical_rhs, storing every `store_every`-th state (the
/// initial and final states are always kept).
Rk4Result rk4_integrate(const OdeSystem &sys, std::span<const double> x0, double dt, std::size_t steps,
                        std::size_t store_every = 1);

} // namespace kvn
