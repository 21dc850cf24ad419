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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "trajcert/error.hpp"
#include "trajcert/order.hpp"
#include "trajcert/rng.hpp"

namespace trajcert {
namespace {

TEST(PartialLeq, Examples) {
  EXPECT_TRUE(partial_leq(StateVector{1, 2}, StateVector{1, 2}));
  EXPECT_FALSE(partial_leq(StateVector{1, 3}, StateVector{2, 2}));
  EXPECT_FALSE(partial_leq(StateVector{2, 2}, StateVector{1, 3}));
  EXPECT_TRUE(partial_leq(StateVector{0.1, 0.3}, StateVector{9.5, 9.9}));
}

TEST(PartialLeq, DimensionMismatchIsUsageError) {
  EXPECT_THROW(partial_leq(StateVector{1, 2}, StateVector{1, 2, 3}), UsageError);
}

TEST(BoxContains, Examples) {
  const BoxRegion unit = BoxRegion::Cube(2, 0.0, 1.0);
  EXPECT_TRUE(box_contains(unit, StateVector{0.5, 0.5}));
  EXPECT_TRUE(box_contains(unit, StateVector{1, 1}));
  EXPECT_FALSE(box_contains(BoxRegion::Cube(5, 4, 6), StateVector{3.9, 5, 5, 5, 5}));
}

TEST(Shift, Examples) {
  EXPECT_EQ(shift(StateVector{1, 2}, 0), (StateVector{1, 2}));
  EXPECT_EQ(shift(StateVector{1, 2}, 0.5), (StateVector{1.5, 2.5}));
  const StateVector s = shift(StateVector{4, 6}, -0.1);
  EXPECT_DOUBLE_EQ(s[0], 3.9);
  EXPECT_DOUBLE_EQ(s[1], 5.9);
}

TEST(StateVector, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(StateVector(std::vector<double>{}), UsageError);
  EXPECT_THROW(StateVector({1.0, std::numeric_limits<double>::quiet_NaN()}), UsageError);
  EXPECT_THROW(StateVector({std::numeric_limits<double>::infinity()}), UsageError);
}

TEST(BoxRegion, RejectsInvertedOrMismatched) {
  EXPECT_THROW(BoxRegion(StateVector{1, 0}, StateVector{0, 1}), UsageError);
  EXPECT_THROW(BoxRegion(StateVector{0}, StateVector{1, 1}), UsageError);
}

TEST(RegionSpec, UnionMembership) {
  const RegionSpec u({BoxRegion::Cube(5, 0.1, 2.0), BoxRegion::Cube(5, 8.0, 10.0)});
  const std::vector<double> low{1, 1, 1, 1, 1}, mid{5, 5, 5, 5, 5}, high{9, 9, 9, 9, 9};
  EXPECT_TRUE(u.contains(low));
  EXPECT_FALSE(u.contains(mid));
  EXPECT_TRUE(u.contains(high));
  EXPECT_THROW(RegionSpec(std::vector<BoxRegion>{}), UsageError);
  EXPECT_THROW(RegionSpec({BoxRegion::Cube(1, 0, 1), BoxRegion::Cube(2, 0, 1)}), UsageError);
}

// Coordinates from a small lattice so that equal components occur often.
std::vector<double> lattice_point(Rng& rng, std::size_t n) {
  std::vector<double> x(n);
  for (auto& v : x) v = static_cast<double>(rng.below(4)) * 0.5;
  return x;
}

TEST(PartialLeqProperty, PartialOrderAxioms) {
  Rng rng(7);
  for (int i = 0; i < 20000; ++i) {
    const auto x = lattice_point(rng, 3), y = lattice_point(rng, 3), z = lattice_point(rng, 3);
    ASSERT_TRUE(partial_leq(x, x));
    if (partial_leq(x, y) && partial_leq(y, x)) ASSERT_EQ(x, y);
    if (partial_leq(x, y) && partial_leq(y, z)) ASSERT_TRUE(partial_leq(x, z));
  }
}

TEST(ShiftProperty, ComposesForRepresentableSums) {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    // Multiples of 1/8 keep every sum exact.
    const double a = static_cast<double>(rng.below(64)) / 8.0 - 4.0;
    const double b = static_cast<double>(rng.below(64)) / 8.0 - 4.0;
    const StateVector x(lattice_point(rng, 4));
    ASSERT_EQ(shift(shift(x, a), b), shift(x, a + b));
  }
}

}  // namespace
}  // namespace trajcert
