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

#include "kvn/kvn_state.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "kvn/errors.hpp"

namespace kvn {

std::vector<double> hermite_ratios(double y, unsigned order) {
  std::vector<double> r(order + 1);
  r[0] = 1.0;
  if (order >= 1) r[1] = std::sqrt(2.0) * y;
  for (unsigned k = 1; k < order; ++k) {
    const double kk = static_cast<double>(k);
    r[k + 1] = y * std::sqrt(2.0 / (kk + 1.0)) * r[k] - std::sqrt(kk / (kk + 1.0)) * r[k - 1];
  }
  return r;
}

KvnState encode(std::span<const double> x0, double lambda, const TruncatedFockBasis &basis) {
  if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw ParameterError("encode: rescale parameter must be >= 1");
  if (x0.size() != basis.mode_count()) throw ContractError("encode: state length differs from mode count");
  const unsigned m = basis.truncation_order();
  std::vector<std::vector<double>> table(x0.size());
  for (std::size_t j = 0; j < x0.size(); ++j) {
    if (!std::isfinite(x0[j])) throw ParameterError("encode: non-finite state entry");
    table[j] = hermite_ratios(lambda * x0[j], m);
  }
  KvnState s{basis, Eigen::VectorXcd(static_cast<Eigen::Index>(basis.dimension())), lambda};
  std::vector<ModeCount> occ;
  for (BasisIndex i = 0; i < basis.dimension(); ++i) {
    basis.unrank_sparse(i, occ);
    double a = 1.0;
    for (const auto &mc : occ) a *= table[mc.mode][mc.count];
    s.amplitudes[static_cast<Eigen::Index>(i)] = a;
  }
  s.amplitudes.normalize();
  return s;
}

Decoded decode_with_diagnostics(const KvnState &state) {
  if (state.dimension() != state.basis.dimension())
    throw ContractError("decode: amplitude length differs from basis dimension");
  const std::complex<double> vac = state.amplitudes[0];
  if (std::abs(vac) <= 1e-14) throw DecodeError("decode: vacuum amplitude vanished");
  const std::complex<double> denom = std::sqrt(2.0) * state.lambda * vac;
  Decoded d;
  d.x.resize(state.basis.mode_count());
  if (state.basis.truncation_order() == 0) return d;
  for (std::size_t j = 0; j < d.x.size(); ++j) {
    const auto r = state.amplitudes[static_cast<Eigen::Index>(state.basis.single_excitation(j))] / denom;
    d.x[j] = r.real();
    d.max_imaginary = std::max(d.max_imaginary, std::abs(r.imag()));
  }
  return d;
}

std::vector<double> decode(const KvnState &state) { return decode_with_diagnostics(state).x; }

double l2_of_decoded(const KvnState &state) {
  double s = 0.0;
  for (double v : decode(state)) s += v * v;
  return std::sqrt(s);
}

std::complex<double> overlap(const KvnState &a, const KvnState &b) {
  if (!(a.basis == b.basis) || a.dimension() != b.dimension())
    throw ContractError("overlap: states live on different bases");
  return a.amplitudes.dot(b.amplitudes);
}

void write_state_csv(std::ostream &os, const KvnState &state) {
  os << "index,occupancy,re,im\n" << std::setprecision(17);
  for (BasisIndex i = 0; i < state.dimension(); ++i) {
    const auto occ = state.basis.unrank(i);
    const auto a = state.amplitudes[static_cast<Eigen::Index>(i)];
    os << i << ",\"" << occupancy_string(occ) << "\"," << a.real() << ',' << a.imag() << '\n';
  }
}

} // namespace kvn
