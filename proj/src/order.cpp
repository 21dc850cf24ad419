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

#include "trajcert/order.hpp"

#include <charconv>
#include <cmath>

#include "trajcert/error.hpp"

namespace trajcert {
namespace {

void check_vector(const std::vector<double>& v) {
  if (v.empty()) throw UsageError("state vector must have dimension >= 1");
  if (!all_finite(v)) throw UsageError("state vector has a non-finite component");
}

void check_dims(std::size_t a, std::size_t b) {
  if (a != b) {
    throw UsageError("dimension mismatch: " + std::to_string(a) + " vs " +
                     std::to_string(b));
  }
}

}  // namespace

StateVector::StateVector(std::initializer_list<double> values) : v_(values) {
  check_vector(v_);
}

StateVector::StateVector(std::vector<double> values) : v_(std::move(values)) {
  check_vector(v_);
}

StateVector::StateVector(std::span<const double> values)
    : v_(values.begin(), values.end()) {
  check_vector(v_);
}

BoxRegion::BoxRegion(StateVector lower, StateVector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  check_dims(lower_.size(), upper_.size());
  if (!partial_leq(lower_, upper_)) {
    throw UsageError("box lower corner " + to_string(lower_.span()) +
                     " is not <= upper corner " + to_string(upper_.span()));
  }
}

BoxRegion BoxRegion::Cube(std::size_t n, double lo, double hi) {
  return BoxRegion(StateVector(std::vector<double>(n, lo)),
                   StateVector(std::vector<double>(n, hi)));
}

RegionSpec::RegionSpec(std::vector<BoxRegion> boxes) : boxes_(std::move(boxes)) {
  if (boxes_.empty()) throw UsageError("region needs at least one box");
  for (const auto& b : boxes_) check_dims(b.dim(), boxes_.front().dim());
}

bool RegionSpec::contains(std::span<const double> x) const {
  for (const auto& b : boxes_) {
    if (box_contains(b, x)) return true;
  }
  return false;
}

bool partial_leq(std::span<const double> x, std::span<const double> y) {
  check_dims(x.size(), y.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] <= y[j])) return false;
  }
  return true;
}

bool box_contains(const BoxRegion& b, std::span<const double> x) {
  check_dims(b.dim(), x.size());
  return partial_leq(b.lower().span(), x) && partial_leq(x, b.upper().span());
}

StateVector shift(const StateVector& x, double c) {
  std::vector<double> out(x.values());
  for (double& v : out) v += c;
  return StateVector(std::move(out));
}

bool all_finite(std::span<const double> x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string to_string(std::span<const double> x) {
  std::string s = "(";
  char buf[32];
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto r = std::to_chars(buf, buf + sizeof buf, x[j]);
    if (j) s += ", ";
    s.append(buf, r.ptr);
  }
  return s + ")";
}

}  // namespace trajcert
