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
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kvn/fock_basis.hpp"

namespace kvn {

/// Amplitudes over a truncated Fock basis together with the rescale Lambda
/// used to encode them.
struct KvnState {
  TruncatedFockBasis basis;
  Eigen::VectorXcd amplitudes;
  double lambda = 1.0;

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(amplitudes.size()); }
};

/// Orthonormal Hermite functions without the Gaussian weight, divided by the
/// k = 0 value: returns r_k(y) = Hbar_k(y)/Hbar_0 for k = 0..order.
std::vector<double> hermite_ratios(double y, unsigned order);

/// Unit-normalized product state amplitude(n) ~ prod_j Hbar_{n_j}(Lambda x_j).
KvnState encode(std::span<const double> x0, double lambda, const TruncatedFockBasis &basis);

struct Decoded {
  std::vector<double> x;
  double max_imaginary = 0.0; ///< largest |Im| of the vacuum-referenced ratios
};

/// x_j = Re[amp(e_j) / (sqrt(2) Lambda amp(vacuum))] after removing the
/// vacuum phase. Throws DecodeError when |amp(vacuum)| <= 1e-14.
Decoded decode_with_diagnostics(const KvnState &state);
std::vector<double> decode(const KvnState &state);

double l2_of_decoded(const KvnState &state);

std::complex<double> overlap(const KvnState &a, const KvnState &b);

/// CSV with columns index,occupancy,re,im.
void write_state_csv(std::ostream &os, const KvnState &state);

} // namespace kvn
