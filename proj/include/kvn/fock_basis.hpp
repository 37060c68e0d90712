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
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kvn {

/// Basis index into a truncated Fock space (0-based).
using BasisIndex = std::uint64_t;

/// Occupation numbers n_0..n_{N-1} of a bosonic product state.
/// Entries are 8-bit; totals are accumulated in 64-bit arithmetic.
using OccupancyVector = std::vector<std::uint8_t>;

/// One occupied mode of a sparse occupancy (count > 0).
struct ModeCount {
  std::uint32_t mode;
  std::uint32_t count;
  friend bool operator==(const ModeCount &, const ModeCount &) = default;
};

/// Checked binomial coefficient. Throws OverflowError instead of wrapping.
BasisIndex binomial(std::uint64_t n, std::uint64_t k);

/// Number of occupancy vectors of length `modes` with total <= `order`,
/// i.e. binomial(modes + order, order).
BasisIndex fock_dimension(std::size_t modes, unsigned order);

enum class Ordering { less, equal, greater };

/// Total order on occupancy vectors: by total occupation first, then by the
/// highest index where the vectors differ (smaller entry is smaller).
Ordering compare(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

std::uint64_t total_occupation(std::span<const std::uint8_t> occ);

/// Bosonic modes 0..N-1 with total occupation capped at m.
///
/// Indices follow the ordering of `compare`: the vacuum is 0, the
/// total-K sector starts at binomial(N+K-1, N), and within a sector the
/// vectors are sorted by the rightmost differing entry.
class TruncatedFockBasis {
public:
  TruncatedFockBasis(std::size_t modes, unsigned order);

  std::size_t mode_count() const noexcept { return modes_; }
  unsigned truncation_order() const noexcept { return order_; }
  BasisIndex dimension() const noexcept { return dimension_; }

  /// First index of the total-K sector.
  BasisIndex sector_offset(unsigned total) const;

  BasisIndex rank(std::span<const std::uint8_t> occ) const;
  /// Rank of a sparse occupancy: entries sorted by ascending mode, counts > 0.
  BasisIndex rank_sparse(std::span<const ModeCount> occupied) const;

  OccupancyVector unrank(BasisIndex idx) const;
  /// Writes the occupied modes of state `idx` in ascending mode order.
  void unrank_sparse(BasisIndex idx, std::vector<ModeCount> &out) const;

  /// Index of the single-excitation state e_j.
  BasisIndex single_excitation(std::size_t mode) const;

  friend bool operator==(const TruncatedFockBasis &a, const TruncatedFockBasis &b) {
    return a.modes_ == b.modes_ && a.order_ == b.order_;
  }

private:
  std::size_t modes_;
  unsigned order_;
  BasisIndex dimension_;
};

/// Human-readable occupancy string such as "0,2,1".
std::string occupancy_string(std::span<const std::uint8_t> occ);

} // namespace kvn
