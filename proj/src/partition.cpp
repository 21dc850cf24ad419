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

#include "trajcert/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trajcert/error.hpp"

namespace trajcert {

GridPartition::GridPartition(BoxRegion domain,
                             std::vector<std::vector<double>> breaks)
    : domain_(std::move(domain)), breaks_(std::move(breaks)) {
  if (breaks_.size() != domain_.dim()) throw UsageError("breakpoint axes != dim");
  for (std::size_t j = 0; j < breaks_.size(); ++j) {
    const auto& b = breaks_[j];
    const double lo = domain_.lower()[j];
    const double hi = domain_.upper()[j];
    if (b.empty() || b.front() != lo || b.back() != hi) {
      throw UsageError("breakpoints must start and end at the domain bounds");
    }
    for (std::size_t k = 1; k < b.size(); ++k) {
      if (!(b[k - 1] < b[k])) throw UsageError("breakpoints must increase");
    }
    const std::size_t c = b.size() == 1 ? 1 : b.size() - 1;
    counts_.push_back(c);
    if (num_cells_ > std::numeric_limits<std::uint64_t>::max() / c) {
      throw UsageError("grid too large");
    }
    num_cells_ *= c;
  }
}

std::uint64_t GridPartition::linear(const CellIndex& i) const {
  if (i.size() != dim()) throw UsageError("cell index dimension");
  std::uint64_t k = 0;
  for (std::size_t j = 0; j < dim(); ++j) {
    if (i[j] >= counts_[j]) throw UsageError("cell index out of range");
    k = k * counts_[j] + i[j];
  }
  return k;
}

CellIndex GridPartition::unlinear(std::uint64_t k) const {
  if (k >= num_cells_) throw UsageError("linear cell index out of range");
  CellIndex i(dim());
  for (std::size_t j = dim(); j-- > 0;) {
    i[j] = static_cast<std::size_t>(k % counts_[j]);
    k /= counts_[j];
  }
  return i;
}

std::size_t GridPartition::axis_locate(std::size_t axis, double v) const {
  const auto& b = breaks_[axis];
  if (b.size() == 1) return 0;
  // First break strictly greater than v; the cell is the one before it.
  auto it = std::upper_bound(b.begin(), b.end(), v);
  std::size_t k = static_cast<std::size_t>(it - b.begin());
  if (k == 0) return 0;
  return std::min(k - 1, counts_[axis] - 1);
}

CellIndex GridPartition::locate(std::span<const double> x) const {
  if (!box_contains(domain_, x)) {
    throw UsageError("point " + to_string(x) + " is outside the partition domain");
  }
  CellIndex i(dim());
  for (std::size_t j = 0; j < dim(); ++j) i[j] = axis_locate(j, x[j]);
  return i;
}

std::uint64_t GridPartition::locate_linear(std::span<const double> x) const {
  return linear(locate(x));
}

double GridPartition::axis_lower(std::size_t axis, std::size_t k) const {
  return breaks_[axis][k];
}

double GridPartition::axis_upper(std::size_t axis, std::size_t k) const {
  const auto& b = breaks_[axis];
  return b.size() == 1 ? b[0] : b[k + 1];
}

std::pair<StateVector, StateVector> GridPartition::cell_corners(
    const CellIndex& i) const {
  std::vector<double> lo(dim()), hi(dim());
  cell_corners(linear(i), lo, hi);
  return {StateVector(std::move(lo)), StateVector(std::move(hi))};
}

void GridPartition::cell_corners(std::uint64_t k, std::span<double> lo,
                                 std::span<double> hi) const {
  if (k >= num_cells_) throw UsageError("cell out of range");
  for (std::size_t j = dim(); j-- > 0;) {
    const std::size_t c = static_cast<std::size_t>(k % counts_[j]);
    k /= counts_[j];
    lo[j] = axis_lower(j, c);
    hi[j] = axis_upper(j, c);
  }
}

namespace {

std::size_t uniform_count(double extent, double width) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw UsageError("partition width must be > 0");
  }
  if (extent == 0.0) return 1;
  const double ratio = extent / width;
  // Absorb representation noise such as 2.0 / 0.5 landing a hair above 4.
  const double r = std::nearbyint(ratio);
  if (std::abs(ratio - r) <= 1e-12 * std::max(1.0, r)) {
    return static_cast<std::size_t>(std::max(1.0, r));
  }
  return static_cast<std::size_t>(std::ceil(ratio));
}

std::vector<double> uniform_breaks(double lo, double hi, std::size_t count) {
  if (lo == hi) return {lo};
  std::vector<double> b(count + 1);
  const double w = (hi - lo) / static_cast<double>(count);
  for (std::size_t k = 0; k < count; ++k) b[k] = lo + static_cast<double>(k) * w;
  b[count] = hi;
  return b;
}

}  // namespace

GridPartition build_partition(const BoxRegion& domain, double target_width) {
  return build_partition(domain, std::vector<double>(domain.dim(), target_width));
}

GridPartition build_partition(const BoxRegion& domain,
                              const std::vector<double>& target_widths) {
  if (target_widths.size() != domain.dim()) throw UsageError("width count != dim");
  std::vector<std::vector<double>> breaks;
  for (std::size_t j = 0; j < domain.dim(); ++j) {
    const double lo = domain.lower()[j];
    const double hi = domain.upper()[j];
    breaks.push_back(uniform_breaks(lo, hi, uniform_count(hi - lo, target_widths[j])));
  }
  return GridPartition(domain, std::move(breaks));
}

GridPartition build_aligned_partition(const BoxRegion& domain, double width,
                                      double anchor) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw UsageError("partition width must be > 0");
  }
  std::vector<std::vector<double>> breaks;
  for (std::size_t j = 0; j < domain.dim(); ++j) {
    const double lo = domain.lower()[j];
    const double hi = domain.upper()[j];
    std::vector<double> b{lo};
    if (lo < hi) {
      auto k = static_cast<long long>(std::floor((lo - anchor) / width)) + 1;
      for (;; ++k) {
        const double v = anchor + static_cast<double>(k) * width;
        if (v >= hi) break;
        if (v > b.back()) b.push_back(v);
      }
      b.push_back(hi);
    }
    breaks.push_back(std::move(b));
  }
  return GridPartition(domain, std::move(breaks));
}

std::vector<std::uint64_t> cover_indices(const GridPartition& p,
                                         const RegionSpec& region) {
  if (region.dim() != p.dim()) throw UsageError("region dimension mismatch");
  std::vector<std::uint64_t> out;
  for (const auto& box : region.boxes()) {
    if (!partial_leq(p.domain().lower(), box.lower()) ||
        !partial_leq(box.upper(), p.domain().upper())) {
      throw UsageError("region box escapes the partition domain");
    }
    // Per-axis index ranges [first, last].
    std::vector<std::size_t> first(p.dim()), last(p.dim());
    for (std::size_t j = 0; j < p.dim(); ++j) {
      const double lo = box.lower()[j];
      const double hi = box.upper()[j];
      if (lo == hi || p.count(j) == 1) {
        std::vector<double> probe(p.domain().lower().values());
        probe[j] = lo;
        const std::size_t c = p.locate(probe)[j];
        first[j] = c;
        last[j] = c;
        if (p.count(j) == 1 || lo == hi) continue;
      }
      std::size_t f = p.count(j), l = 0;
      for (std::size_t k = 0; k < p.count(j); ++k) {
        if (p.axis_lower(j, k) < hi && p.axis_upper(j, k) > lo) {
          f = std::min(f, k);
          l = std::max(l, k);
        }
      }
      first[j] = f;
      last[j] = l;
    }
    CellIndex idx(first);
    while (true) {
      out.push_back(p.linear(idx));
      std::size_t j = p.dim();
      while (j-- > 0) {
        if (idx[j] < last[j]) {
          ++idx[j];
          break;
        }
        idx[j] = first[j];
      }
      if (j == static_cast<std::size_t>(-1)) break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CoverSets compute_covers(const GridPartition& p, const RegionSpec& initial,
                         const RegionSpec& unsafe) {
  return {cover_indices(p, initial), cover_indices(p, unsafe)};
}

}  // namespace trajcert
