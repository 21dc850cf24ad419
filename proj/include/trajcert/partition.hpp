// Copyright 2026 The trajcert Authors.
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

// Hyper-rectangular grids over the state box.
//
// Cells are half-open [b_k, b_{k+1}) on every axis except the last cell of
// each axis, which is closed, so every point of the domain lies in exactly
// one cell. Corner evaluation always uses the closed cell.

#ifndef TRAJCERT_PARTITION_HPP_
#define TRAJCERT_PARTITION_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "trajcert/order.hpp"

namespace trajcert {

using CellIndex = std::vector<std::size_t>;

class GridPartition {
 public:
  // breaks[j] is strictly increasing, starts at domain.lower[j] and ends at
  // domain.upper[j]. A zero-extent axis has the single break {lower}, which
  // counts as one degenerate cell.
  GridPartition(BoxRegion domain, std::vector<std::vector<double>> breaks);

  const BoxRegion& domain() const { return domain_; }
  std::size_t dim() const { return breaks_.size(); }
  std::size_t count(std::size_t axis) const { return counts_[axis]; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  const std::vector<double>& breaks(std::size_t axis) const { return breaks_[axis]; }
  const std::vector<std::vector<double>>& all_breaks() const { return breaks_; }
  std::uint64_t num_cells() const { return num_cells_; }

  // Row-major linear index; the last axis varies fastest.
  std::uint64_t linear(const CellIndex& i) const;
  CellIndex unlinear(std::uint64_t k) const;

  // Cell owning x under the half-open convention. x must lie in the domain.
  CellIndex locate(std::span<const double> x) const;
  std::uint64_t locate_linear(std::span<const double> x) const;

  // Closed-box corners of cell i.
  std::pair<StateVector, StateVector> cell_corners(const CellIndex& i) const;
  // Same, writing into caller buffers (hot path).
  void cell_corners(std::uint64_t k, std::span<double> lo,
                    std::span<double> hi) const;

  // Axis interval [lo, hi] of cell k on one axis.
  double axis_lower(std::size_t axis, std::size_t k) const;
  double axis_upper(std::size_t axis, std::size_t k) const;

 private:
  std::size_t axis_locate(std::size_t axis, double v) const;

  BoxRegion domain_;
  std::vector<std::vector<double>> breaks_;
  std::vector<std::size_t> counts_;
  std::uint64_t num_cells_ = 1;
};

// Uniform grid: per axis count = ceil(extent / width), actual width
// extent / count.
GridPartition build_partition(const BoxRegion& domain, double target_width);
// Uniform grid with a separate target width per axis.
GridPartition build_partition(const BoxRegion& domain,
                              const std::vector<double>& target_widths);
// Grid whose interior breakpoints sit at anchor + k * width, clipped to the
// domain, so cell faces line up with region boundaries that are multiples of
// the width (e.g. [0.1, 0.5], [0.5, 1.0], ... on [0.1, 10]).
GridPartition build_aligned_partition(const BoxRegion& domain, double width,
                                      double anchor = 0.0);

// Sorted linear indices of all cells whose closed box overlaps the region with
// positive length on every axis. On an axis where a region box has zero
// extent, the cell owning that coordinate (half-open rule) is used.
std::vector<std::uint64_t> cover_indices(const GridPartition& p,
                                         const RegionSpec& region);

struct CoverSets {
  std::vector<std::uint64_t> initial;
  std::vector<std::uint64_t> unsafe;
};

CoverSets compute_covers(const GridPartition& p, const RegionSpec& initial,
                         const RegionSpec& unsafe);

}  // namespace trajcert

#endif  // TRAJCERT_PARTITION_HPP_
