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

#include "kvn/fock_basis.hpp"

#include <algorithm>
#include <limits>

#include "kvn/errors.hpp"

namespace kvn {

BasisIndex binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  // For k <= n/2 the partial products C(n-k+i, i) grow monotonically, so
  // checking every step catches overflow exactly.
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned __int128>(n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max())
      throw OverflowError("binomial(" + std::to_string(n) + ", " +
                          std::to_string(k) + ") exceeds 64 bits");
  }
  return static_cast<BasisIndex>(r);
}

BasisIndex fock_dimension(std::size_t modes, unsigned order) {
  if (modes == 0) throw ContractError("fock_dimension: mode count must be >= 1");
  return binomial(modes + order, order);
}

std::uint64_t total_occupation(std::span<const std::uint8_t> occ) {
  std::uint64_t k = 0;
  for (auto n : occ) k += n;
  return k;
}

Ordering compare(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size())
    throw ContractError("compare: occupancy vectors differ in length");
  const auto ka = total_occupation(a);
  const auto kb = total_occupation(b);
  if (ka != kb) return ka < kb ? Ordering::less : Ordering::greater;
  for (std::size_t k = a.size(); k-- > 0;) {
    if (a[k] != b[k]) return a[k] < b[k] ? Ordering::less : Ordering::greater;
  }
  return Ordering::equal;
}

TruncatedFockBasis::TruncatedFockBasis(std::size_t modes, unsigned order)
    : modes_(modes), order_(order), dimension_(0) {
  if (modes == 0) throw ContractError("TruncatedFockBasis: mode count must be >= 1");
  if (order > std::numeric_limits<std::uint8_t>::max())
    throw ContractError("TruncatedFockBasis: truncation order exceeds 8-bit occupancy");
  dimension_ = fock_dimension(modes, order);
}

BasisIndex TruncatedFockBasis::sector_offset(unsigned total) const {
  if (total == 0) return 0;
  return binomial(modes_ + total - 1, modes_);
}

BasisIndex TruncatedFockBasis::rank_sparse(std::span<const ModeCount> occupied) const {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < occupied.size(); ++i) {
    if (occupied[i].mode >= modes_) throw ContractError("rank: mode index out of range");
    if (occupied[i].count == 0) throw ContractError("rank: sparse occupancy with zero count");
    if (i > 0 && occupied[i].mode <= occupied[i - 1].mode)
      throw ContractError("rank: sparse occupancy not strictly ascending");
    total += occupied[i].count;
  }
  if (total > order_)
    throw TruncationError("rank: total occupation " + std::to_string(total) +
                          " exceeds truncation order " + std::to_string(order_));
  if (total == 0) return 0;

  BasisIndex idx = sector_offset(static_cast<unsigned>(total));
  std::uint64_t suffix = 0;
  for (std::size_t i = occupied.size(); i-- > 0;) {
    const std::uint64_t k = occupied[i].mode;
    const std::uint64_t nk = occupied[i].count;
    if (k >= 1) {
      for (std::uint64_t j = 0; j < nk; ++j)
        idx += binomial(total - suffix - j + k - 1, k - 1);
    }
    suffix += nk;
  }
  return idx;
}

BasisIndex TruncatedFockBasis::rank(std::span<const std::uint8_t> occ) const {
  if (occ.size() != modes_) throw ContractError("rank: occupancy length differs from mode count");
  std::vector<ModeCount> occupied;
  for (std::size_t j = 0; j < occ.size(); ++j)
    if (occ[j] > 0) occupied.push_back({static_cast<std::uint32_t>(j), occ[j]});
  return rank_sparse(occupied);
}

void TruncatedFockBasis::unrank_sparse(BasisIndex idx, std::vector<ModeCount> &out) const {
  if (idx >= dimension_)
    throw IndexError("unrank: index " + std::to_string(idx) + " outside [0, " +
                     std::to_string(dimension_) + ")");
  out.clear();
  unsigned total = 0;
  while (idx >= binomial(modes_ + total, total)) ++total;
  BasisIndex local = idx - sector_offset(total);

  std::uint64_t remaining = total;
  std::uint64_t upper = modes_ - 1;
  while (remaining > 0) {
    if (upper == 0) {
      out.push_back({0, static_cast<std::uint32_t>(remaining)});
      break;
    }
    // binomial(R+k-1, k-1) counts the states whose entries above k-1 are
    // zero; it grows with k, so the highest nonzero position is found by
    // bisection.
    std::uint64_t lo = 1, hi = upper, found = 0;
    while (lo <= hi) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      if (binomial(remaining + mid - 1, mid - 1) <= local) {
        found = mid;
        lo = mid + 1;
      } else {
        hi = mid - 1;
      }
    }
    if (found == 0) {
      out.push_back({0, static_cast<std::uint32_t>(remaining)});
      break;
    }
    std::uint64_t j = 0;
    for (;;) {
      const auto block = binomial(remaining - j + found - 1, found - 1);
      if (local < block) break;
      local -= block;
      ++j;
    }
    out.push_back({static_cast<std::uint32_t>(found), static_cast<std::uint32_t>(j)});
    remaining -= j;
    upper = found - 1;
  }
  std::reverse(out.begin(), out.end());
}

OccupancyVector TruncatedFockBasis::unrank(BasisIndex idx) const {
  std::vector<ModeCount> occupied;
  unrank_sparse(idx, occupied);
  OccupancyVector occ(modes_, 0);
  for (const auto &mc : occupied) occ[mc.mode] = static_cast<std::uint8_t>(mc.count);
  return occ;
}

BasisIndex TruncatedFockBasis::single_excitation(std::size_t mode) const {
  if (mode >= modes_) throw IndexError("single_excitation: mode out of range");
  if (order_ == 0) throw TruncationError("single_excitation: truncation order 0 has no excitations");
  return 1 + static_cast<BasisIndex>(mode);
}

std::string occupancy_string(std::span<const std::uint8_t> occ) {
  std::string s;
  for (std::size_t j = 0; j < occ.size(); ++j) {
    if (j) s += ',';
    s += std::to_string(occ[j]);
  }
  return s;
}

} // namespace kvn
