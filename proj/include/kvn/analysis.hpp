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

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kvn/emhd_model.hpp"
#include "kvn/kvn_state.hpp"

namespace kvn {

/// Delta(t) = | ||x(t)|| - ||x(0)|| | for each stored state.
std::vector<double> l2_deviation(std::span<const std::vector<double>> trajectory);
/// Same, decoding each state first; decode errors report the failing index.
std::vector<double> l2_deviation(std::span<const KvnState> trajectory);

/// Twice the mean spacing of the linearly interpolated zero crossings (both
/// directions). Throws MeasurementError with fewer than three crossings.
double extract_period(std::span<const double> series, double dt);

struct GrowthFit {
  double gamma = 0.0;
  double intercept = 0.0;
  double residual = 0.0; ///< RMS of the log-space residuals
  std::size_t points = 0;
};

/// Least-squares slope of log(series) over samples with t in [t0, t1],
/// t = k dt. Throws FitDomainError on non-positive samples in the window.
GrowthFit growth_rate_fit(std::span<const double> series, double dt, double t0, double t1);

/// Dense Jacobian dF_i/dx_j at x from the interaction lists.
Eigen::MatrixXd jacobian(const OdeSystem &sys, std::span<const double> x);

struct StabilityMode {
  double gamma_max = 0.0;    ///< largest real part
  double frequency = 0.0;    ///< |imaginary part| of that eigenvalue
  Eigen::VectorXcd mode;     ///< its eigenvector
  double eigen_time = 0.0;   ///< 2 pi / frequency if oscillatory, else 1 / gamma_max
  double condition = 0.0;    ///< ||J|| / smallest |eigenvalue gap| diagnostic
};

StabilityMode linear_stability_growth_rate(const OdeSystem &sys, std::span<const double> background);

/// Default fit window [0.05, 0.5] T_eigen.
std::pair<double, double> default_fit_window(const StabilityMode &mode);

} // namespace kvn
