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

#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "kvn/errors.hpp"
#include "kvn/kvn_state.hpp"
#include "oracles.hpp"

namespace {

double factorial(unsigned k) { return std::tgamma(k + 1.0); }

TEST(KvnState, HermiteRatiosMatchPolynomials) {
  for (double y : {-2.3, -0.4, 0.0, 0.9, 3.1}) {
    const auto r = kvn::hermite_ratios(y, 6);
    ASSERT_EQ(r.size(), 7u);
    for (unsigned k = 0; k <= 6; ++k)
      EXPECT_NEAR(r[k], oracle::hermite(k, y) / std::sqrt(std::pow(2.0, k) * factorial(k)),
                  1e-12 * std::max(1.0, std::abs(r[k])));
  }
}

TEST(KvnState, EncodeIsNormalizedProductState) {
  const std::vector<double> x{0.3, -0.7, 1.1};
  const double lambda = 1.7;
  kvn::TruncatedFockBasis basis(3, 3);
  const auto st = kvn::encode(x, lambda, basis);
  EXPECT_NEAR(st.amplitudes.norm(), 1.0, 1e-14);
  // reference amplitudes from the explicit product, then normalized
  const auto states = oracle::all_states(3, 3);
  Eigen::VectorXd ref(static_cast<Eigen::Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) {
    double v = 1.0;
    for (std::size_t j = 0; j < 3; ++j)
      v *= oracle::hermite(states[k][j], lambda * x[j]) /
           std::sqrt(std::pow(2.0, states[k][j]) * factorial(states[k][j]));
    ref[static_cast<Eigen::Index>(k)] = v;
  }
  ref.normalize();
  for (Eigen::Index k = 0; k < ref.size(); ++k) {
    EXPECT_NEAR(st.amplitudes[k].real(), ref[k], 1e-13);
    EXPECT_EQ(st.amplitudes[k].imag(), 0.0);
  }
}

TEST(KvnState, DecodeInvertsEncode) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  for (double lambda : {1.0, 2.5, 1e4}) {
    std::vector<double> x(10);
    for (auto &v : x) v = g(rng);
    kvn::TruncatedFockBasis basis(10, 2);
    const auto st = kvn::encode(x, lambda, basis);
    const auto d = kvn::decode_with_diagnostics(st);
    for (std::size_t j = 0; j < x.size(); ++j) EXPECT_NEAR(d.x[j], x[j], 1e-12 * std::max(1.0, std::abs(x[j])));
    EXPECT_LT(d.max_imaginary, 1e-12);
    double l2 = 0.0;
    for (double v : x) l2 += v * v;
    EXPECT_NEAR(kvn::l2_of_decoded(st), std::sqrt(l2), 1e-11);
  }
}

TEST(KvnState, DecodeIgnoresGlobalPhase) {
  kvn::TruncatedFockBasis basis(4, 2);
  const std::vector<double> x{0.2, -0.1, 0.4, 0.05};
  auto st = kvn::encode(x, 1.0, basis);
  st.amplitudes *= std::polar(1.0, 0.8);
  const auto d = kvn::decode(st);
  for (std::size_t j = 0; j < x.size(); ++j) EXPECT_NEAR(d[j], x[j], 1e-13);
  EXPECT_NEAR(std::abs(kvn::overlap(st, st)), 1.0, 1e-14);
}

TEST(KvnState, DecodeFailsOnEmptyVacuum) {
  kvn::TruncatedFockBasis basis(3, 1);
  kvn::KvnState st{basis, Eigen::VectorXcd::Zero(4), 1.0};
  st.amplitudes[2] = 1.0;
  EXPECT_THROW(kvn::decode(st), kvn::DecodeError);
}

TEST(KvnState, CsvHasOneRowPerBasisState) {
  kvn::TruncatedFockBasis basis(2, 2);
  const auto st = kvn::encode(std::vector<double>{0.1, 0.2}, 1.0, basis);
  std::stringstream ss;
  kvn::write_state_csv(ss, st);
  std::string line;
  int rows = 0;
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, 1 + 6);
}

} // namespace
