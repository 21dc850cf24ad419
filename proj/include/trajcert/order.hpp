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

// Componentwise partial order on R^n and axis-aligned boxes.
//
// All comparisons are exact. No tolerance is ever added to the order; margins
// belong in the certificate constraints, not here.

#ifndef TRAJCERT_ORDER_HPP_
#define TRAJCERT_ORDER_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace trajcert {

// A finite vector of dimension >= 1.
class StateVector {
 public:
  StateVector(std::initializer_list<double> values);
  explicit StateVector(std::vector<double> values);
  explicit StateVector(std::span<const double> values);

  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  const double* data() const { return v_.data(); }
  std::span<const double> span() const { return v_; }
  const std::vector<double>& values() const { return v_; }

  friend bool operator==(const StateVector& a, const StateVector& b) {
    return a.v_ == b.v_;
  }

 private:
  std::vector<double> v_;
};

// Closed box [lower, upper].
class BoxRegion {
 public:
  BoxRegion(StateVector lower, StateVector upper);

  const StateVector& lower() const { return lower_; }
  const StateVector& upper() const { return upper_; }
  std::size_t dim() const { return lower_.size(); }

  // The cube [lo, hi]^n.
  static BoxRegion Cube(std::size_t n, double lo, double hi);

 private:
  StateVector lower_;
  StateVector upper_;
};

// A nonempty finite union of boxes of equal dimension.
class RegionSpec {
 public:
  explicit RegionSpec(std::vector<BoxRegion> boxes);

  const std::vector<BoxRegion>& boxes() const { return boxes_; }
  std::size_t dim() const { return boxes_.front().dim(); }
  bool contains(std::span<const double> x) const;

 private:
  std::vector<BoxRegion> boxes_;
};

bool partial_leq(std::span<const double> x, std::span<const double> y);
inline bool partial_leq(const StateVector& x, const StateVector& y) {
  return partial_leq(x.span(), y.span());
}

bool box_contains(const BoxRegion& b, std::span<const double> x);
inline bool box_contains(const BoxRegion& b, const StateVector& x) {
  return box_contains(b, x.span());
}

StateVector shift(const StateVector& x, double c);

// True when every component of x is finite.
bool all_finite(std::span<const double> x);

std::string to_string(std::span<const double> x);

}  // namespace trajcert

#endif  // TRAJCERT_ORDER_HPP_
