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

#include "kvn/analysis.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "kvn/errors.hpp"

namespace kvn {

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

} // namespace

std::vector<double> l2_deviation(std::span<const std::vector<double>> trajectory) {
  std::vector<double> d;
  if (trajectory.empty()) return d;
  const double n0 = norm2(trajectory.front());
  d.reserve(trajectory.size());
  for (const auto &x : trajectory) d.push_back(std::abs(norm2(x) - n0));
  return d;
}

std::vector<double> l2_deviation(std::span<const KvnState> trajectory) {
  std::vector<std::vector<double>> xs;
  xs.reserve(trajectory.size());
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    try {
      xs.push_back(decode(trajectory[k]));
    } catch (const DecodeError &e) {
      throw DecodeError(std::string(e.what()) + " at trajectory index " + std::to_string(k));
    }
  }
  return l2_deviation(std::span<const std::vector<double>>(xs));
}

double extract_period(std::span<const double> series, double dt) {
  if (!(dt > 0.0)) throw ParameterError("extract_period: dt must be positive");
  std::vector<double> crossings;
  for (std::size_t k = 0; k + 1 < series.size(); ++k) {
    const double a = series[k], b = series[k + 1];
    if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) {
      if (b == 0.0 && k + 2 < series.size() && (series[k + 2] > 0.0) == (a > 0.0)) continue; // touch, no crossing
      crossings.push_back((static_cast<double>(k) + a / (a - b)) * dt);
    }
  }
  if (crossings.size() < 3)
    throw MeasurementError("extract_period: " + std::to_string(crossings.size()) + " zero crossings, need 3");
  return 2.0 * (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
}

GrowthFit growth_rate_fit(std::span<const double> series, double dt, double t0, double t1) {
  if (!(dt > 0.0) || !(t1 > t0)) throw ParameterError("growth_rate_fit: invalid window or step");
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double t = static_cast<double>(k) * dt;
    if (t < t0 - 1e-12 * dt || t > t1 + 1e-12 * dt) continue;
    if (!(series[k] > 0.0))
      throw FitDomainError("growth_rate_fit: non-positive sample at t = " + std::to_string(t));
    const double y = std::log(series[k]);
    pts.push_back({t, y});
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  if (pts.size() < 2) throw MeasurementError("growth_rate_fit: fewer than two samples in the window");
  const double n = static_cast<double>(pts.size());
  GrowthFit f;
  f.points = pts.size();
  f.gamma = (n * sty - st * sy) / (n * stt - st * st);
  f.intercept = (sy - f.gamma * st) / n;
  double r2 = 0.0;
  for (const auto &[t, y] : pts) r2 += std::pow(y - f.intercept - f.gamma * t, 2);
  f.residual = std::sqrt(r2 / n);
  return f;
}

Eigen::MatrixXd jacobian(const OdeSystem &sys, std::span<const double> x) {
  if (x.size() != sys.variable_count) throw ContractError("jacobian: state length mismatch");
  const auto n = static_cast<Eigen::Index>(sys.variable_count);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (const auto &it : sys.interactions) {
    const std::size_t s = it.vars.size();
    for (std::size_t a = 0; a < s; ++a) {
      if (it.alpha[a] == 0.0) continue;
      for (std::size_t c = 0; c < s; ++c) {
        if (c == a) continue;
        double v = it.alpha[a];
        for (std::size_t b = 0; b < s; ++b)
          if (b != a && b != c) v *= x[it.vars[b]];
        j(static_cast<Eigen::Index>(it.vars[a]), static_cast<Eigen::Index>(it.vars[c])) += v;
      }
    }
  }
  return j;
}

StabilityMode linear_stability_growth_rate(const OdeSystem &sys, std::span<const double> background) {
  const Eigen::MatrixXd j = jacobian(sys, background);
  Eigen::EigenSolver<Eigen::MatrixXd> es(j, true);
  if (es.info() != Eigen::Success)
    throw NumericalError("linear_stability_growth_rate: eigen-solver failed (||J|| = " +
                         std::to_string(j.norm()) + ")");
  const auto &ev = es.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < ev.size(); ++k)
    if (ev[k].real() > ev[best].real()) best = k;
  StabilityMode m;
  m.gamma_max = ev[best].real();
  m.frequency = std::abs(ev[best].imag());
  m.mode = es.eigenvectors().col(best);
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (k != best) gap = std::min(gap, std::abs(ev[k] - ev[best]));
  m.condition = gap > 0.0 ? j.norm() / gap : std::numeric_limits<double>::infinity();
  const double scale = std::max(std::abs(ev[best]), 1e-300);
  if (m.frequency > 1e-8 * scale) m.eigen_time = 2.0 * std::numbers::pi / m.frequency;
  else if (m.gamma_max > 0.0) m.eigen_time = 1.0 / m.gamma_max;
  else m.eigen_time = std::numeric_limits<double>::infinity();
  return m;
}

std::pair<double, double> default_fit_window(const StabilityMode &mode) {
  return {0.05 * mode.eigen_time, 0.5 * mode.eigen_time};
}

} // namespace kvn
