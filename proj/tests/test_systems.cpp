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

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "support.hpp"
#include "trajcert/error.hpp"
#include "trajcert/systems.hpp"
#include "trajcert/trajectory_io.hpp"

namespace trajcert {
namespace {

// Lotka-Volterra data written out independently of the library.
constexpr double kA[5][5] = {{0.00, 0.02, 0.00, 0.00, 0.00},
                             {0.01, 0.00, 0.00, 0.02, 0.02},
                             {0.00, 0.00, 0.00, 0.01, 0.02},
                             {0.00, 0.02, 0.02, 0.00, 0.00},
                             {0.00, 0.01, 0.01, 0.00, 0.00}};
constexpr double kR[5] = {0.22, 0.29, 0.26, 0.25, 0.23};
constexpr double kK[5] = {3.81, 2.47, 4.23, 2.93, 4.89};

TEST(LotkaVolterra, FixedPointIsStationary) {
  Eigen::Matrix<double, 5, 5> M;
  Eigen::Matrix<double, 5, 1> rhs;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) M(i, j) = kA[i][j] - (i == j ? kR[i] / kK[i] : 0.0);
    rhs(i) = -kR[i];
  }
  const Eigen::Matrix<double, 5, 1> xs = M.fullPivLu().solve(rhs);
  const SystemModel sys = make_lotka_volterra(0.2);
  const std::vector<double> x(xs.data(), xs.data() + 5);
  const auto fx = step(sys, x, {});
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(fx[i], x[i], 1e-12);
}

TEST(LotkaVolterra, MatchesHandEvaluation) {
  const SystemModel sys = make_lotka_volterra(0.2);
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  const auto fx = step(sys, x, {});
  for (int i = 0; i < 5; ++i) {
    double g = kR[i] - kR[i] / kK[i] * x[i];
    for (int j = 0; j < 5; ++j) g += kA[i][j] * x[j];
    EXPECT_NEAR(fx[i], x[i] + 0.2 * x[i] * g, 1e-14);
  }
  // Spot value of the first coordinate: A[0][1] = 0.02, r = 0.22, K = 3.81.
  EXPECT_NEAR(fx[0], 1.0 + 0.2 * (0.22 - 0.22 / 3.81 + 0.04), 1e-14);
}

TEST(LotkaVolterra, StepSizeRange) {
  EXPECT_NO_THROW(make_lotka_volterra(0.2));
  EXPECT_THROW(make_lotka_volterra(3.0), UsageError);
}

TEST(LotkaVolterra, SetsFromExample) {
  const SystemModel sys = make_lotka_volterra(0.2);
  EXPECT_EQ(sys.dim, 5u);
  EXPECT_EQ(sys.input_role, InputRole::None);
  EXPECT_TRUE(sys.unsafe_set.contains(std::vector<double>{1, 1, 1, 1, 1}));
  EXPECT_TRUE(sys.unsafe_set.contains(std::vector<double>{9, 9, 9, 9, 9}));
  EXPECT_TRUE(sys.initial_set.contains(std::vector<double>{4, 6, 5, 4, 6}));
}

TEST(Traffic, ZeroStepIsIdentity) {
  const SystemModel sys = make_traffic(0.0, StateVector{10, 10});
  const std::vector<double> x{3.25, 7.5}, u{9.0, 0.6};
  EXPECT_EQ(step(sys, x, u), x);
}

TEST(Traffic, StepMatchesHandEvaluation) {
  const SystemModel sys = make_traffic(0.01, StateVector{10, 10});
  const auto fx = step(sys, std::vector<double>{9.5, 9.9}, std::vector<double>{9.0, 0.6});
  const double phi1 = 10.0 * (1.0 - std::exp(-9.5));
  const double phi2 = 10.0 * (1.0 - std::exp(-9.9));
  EXPECT_DOUBLE_EQ(fx[0], 9.5 + 0.01 * (9.0 - phi1));
  EXPECT_DOUBLE_EQ(fx[1], 9.9 + 0.01 * (0.6 * phi1 - phi2));
}

TEST(Traffic, InputSetAndOutflowAtZero) {
  const SystemModel sys = make_traffic(0.01, StateVector{10, 10});
  ASSERT_TRUE(sys.input_set.has_value());
  EXPECT_EQ(sys.input_set->upper(), (StateVector{10, 0.9}));
  EXPECT_EQ(sys.input_set->lower(), (StateVector{0, 0.1}));
  // phi(0) = 0, so zero inflow leaves the origin fixed.
  EXPECT_EQ(step(sys, std::vector<double>{0, 0}, std::vector<double>{0, 0.5}),
            (std::vector<double>{0, 0}));
}

TEST(Traffic, FirstCoordinateMovesBoundedly) {
  const SystemModel sys = make_traffic(0.01, StateVector{10, 10});
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const auto x = sample_box(sys.state_set, rng);
    const auto u = sample_box(*sys.input_set, rng);
    std::vector<double> out(2);
    sys.transition(x, u, out);
    EXPECT_LE(std::abs(out[0] - x[0]), 0.01 * std::max(u[0], 10.0));
  }
}

TEST(Traffic, RejectsLargeStep) { EXPECT_THROW(make_traffic(0.02, StateVector{10, 10}), UsageError); }

TEST(Simulate, ZeroHorizon) {
  const SystemModel sys = make_traffic(0.01, StateVector{10, 10});
  const Trajectory t = simulate(sys, StateVector{1, 2}, ConstantInput{{9, 0.5}}, 0, 1);
  EXPECT_EQ(t.horizon(), 0u);
  EXPECT_EQ(t.flat_states(), (std::vector<double>{1, 2}));
  EXPECT_TRUE(t.flat_inputs().empty());
}

TEST(Simulate, ExampleTrajectoriesApproachEquilibriumMonotonically) {
  const auto& ex = testing::example1();
  const Trajectory& t = *ex.trajs[0];
  ASSERT_EQ(t.horizon(), 400u);
  for (std::size_t s = 0; s < t.horizon(); ++s) {
    ASSERT_TRUE(partial_leq(t.state(s), t.state(s + 1))) << "step " << s;
  }
  const Trajectory& d = *ex.trajs[1];
  // x3 starts below its neighbours' pull and rises once before decreasing.
  EXPECT_GT(d.state(1)[2], d.state(0)[2]);
  for (std::size_t s = 1; s < d.horizon(); ++s) {
    ASSERT_TRUE(partial_leq(d.state(s + 1), d.state(s))) << "step " << s;
  }
}

TEST(Simulate, DeterministicPerSeed) {
  const SystemModel sys = make_contractive_linear(3);
  const auto a = simulate(sys, StateVector{0.5, -0.5, 0}, SampledDisturbance{}, 50, 99);
  const auto b = simulate(sys, StateVector{0.5, -0.5, 0}, SampledDisturbance{}, 50, 99);
  const auto c = simulate(sys, StateVector{0.5, -0.5, 0}, SampledDisturbance{}, 50, 100);
  EXPECT_EQ(a.flat_states(), b.flat_states());
  EXPECT_NE(a.flat_states(), c.flat_states());
  EXPECT_FALSE(a.has_inputs());
}

TEST(Simulate, ControlledRecordsInputs) {
  const auto& ex = testing::example2();
  const Trajectory& t = *ex.trajs[0];
  ASSERT_TRUE(t.has_inputs());
  EXPECT_EQ(t.flat_inputs().size(), 2 * t.horizon());
  EXPECT_EQ(t.input(0)[1], 0.6);
  EXPECT_EQ(t.policy_id(), "pi1");
}

TEST(Simulate, EscapeIsReported) {
  const SystemModel sys = make_traffic(0.01, StateVector{5, 5});
  EXPECT_THROW(simulate(sys, StateVector{9.5, 9.9}, ConstantInput{{9, 0.6}}, 5000, 0),
               StateEscapeError);
}

TEST(SampleDisturbance, DegenerateAndInBounds) {
  Rng rng(5);
  const BoxRegion point(StateVector{0.25, -3}, StateVector{0.25, -3});
  EXPECT_EQ(sample_disturbance(point, rng), (std::vector<double>{0.25, -3}));
  const BoxRegion unit = BoxRegion::Cube(1, 0, 1);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const double v = sample_disturbance(unit, rng)[0];
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
    sum += v;
  }
  EXPECT_NEAR(sum / 10000, 0.5, 0.02);
}

TEST(AuditMonotonicity, BuiltInsAreMonotone) {
  EXPECT_TRUE(audit_monotonicity(make_lotka_volterra(0.2), 1000, MonotonicityMode::SM, 1)
                  .violations.empty());
  EXPECT_TRUE(audit_monotonicity(make_traffic(0.01, StateVector{10, 10}), 1000,
                                 MonotonicityMode::SIM, 2)
                  .violations.empty());
  EXPECT_TRUE(audit_monotonicity(make_contractive_linear(2), 1000, MonotonicityMode::SIM, 3)
                  .violations.empty());
}

TEST(AuditMonotonicity, NegationIsCaught) {
  SystemModel neg{"negation",
                  1,
                  0,
                  BoxRegion::Cube(1, -1, 1),
                  RegionSpec({BoxRegion::Cube(1, -1, 1)}),
                  RegionSpec({BoxRegion::Cube(1, -1, 1)}),
                  std::nullopt,
                  InputRole::None,
                  [](std::span<const double> x, std::span<const double>, std::span<double> out) {
                    out[0] = -x[0];
                  }};
  EXPECT_FALSE(audit_monotonicity(neg, 1000, MonotonicityMode::SM, 4).violations.empty());
}

TEST(Policy, AffineMonotoneFlagAndAudit) {
  const auto up = FeedbackPolicy::Affine("up", 2, {1.0, 0.5}, {0.1});
  const auto down = FeedbackPolicy::Affine("down", 2, {1.0, -0.5}, {0.1});
  EXPECT_TRUE(up.monotone());
  EXPECT_FALSE(down.monotone());
  const BoxRegion dom = BoxRegion::Cube(2, 0, 1);
  EXPECT_TRUE(audit_policy_monotonicity(up, dom, 1000, 1).violations.empty());
  EXPECT_FALSE(audit_policy_monotonicity(down, dom, 1000, 1).violations.empty());
  EXPECT_DOUBLE_EQ(up(std::vector<double>{1, 2})[0], 2.1);
}

TEST(Tail, CompactTailEstimates) {
  EXPECT_EQ(*estimate_compact_tail(*testing::traj_1d({3, 3, 3, 3}), 2).epsilon, 0.0);
  EXPECT_EQ(*estimate_compact_tail(*testing::traj_1d({4, 3, 2, 1}), 2).epsilon, 2.0);
  // The window is clipped to the horizon.
  EXPECT_EQ(*estimate_compact_tail(*testing::traj_1d({4, 3, 2, 1}), 50).epsilon, 3.0);
}

TEST(Tail, ExampleTrajectoriesConverge) {
  for (const auto& t : testing::example1().trajs) {
    const double eps = *t->tail().epsilon;
    EXPECT_GT(eps, 0.0);
    EXPECT_LT(eps, 1e-4);
  }
}

TEST(Tail, DominatingDetection) {
  EXPECT_EQ(detect_dominating_tail(*testing::traj_1d({4, 3, 2, 1})), Dominating::UpperDominating);
  EXPECT_EQ(detect_dominating_tail(*testing::traj_1d({1, 2, 3, 4})), Dominating::LowerDominating);
  EXPECT_EQ(detect_dominating_tail(Trajectory::FromRows({{1, 2}, {2, 1}})), Dominating::Neither);
  const TailInfo flat = estimate_compact_tail(*testing::traj_1d({2, 2}), 5);
  EXPECT_TRUE(flat.upper_dominating);
  EXPECT_TRUE(flat.lower_dominating);
  EXPECT_EQ(detect_dominating_tail(*testing::traj_1d({7})), Dominating::Neither);
}

TEST(Lipschitz, Validation) {
  EXPECT_NO_THROW((LipschitzBounds{0.5, 0.1, 0.0}.validate()));
  EXPECT_THROW((LipschitzBounds{0.0, 1.0, 0.0}.validate()), UsageError);
  EXPECT_THROW((LipschitzBounds{1.0, 1.0, -1.0}.validate()), UsageError);
}

TEST(TrajectoryIo, JsonAndCsvRoundTripBitExact) {
  const std::string dir = testing::scratch_dir("traj_io");
  const auto& ex = testing::example2();
  const Trajectory& t = *ex.trajs[1];
  write_trajectory_json(dir + "/t.json", t);
  write_trajectory_csv(dir + "/t.csv", t);
  const Trajectory j = read_trajectory_json(dir + "/t.json");
  const Trajectory c = read_trajectory_csv(dir + "/t.csv");
  EXPECT_EQ(j.flat_states(), t.flat_states());
  EXPECT_EQ(j.flat_inputs(), t.flat_inputs());
  EXPECT_EQ(j.policy_id(), "pi2");
  EXPECT_EQ(*j.tail().epsilon, *t.tail().epsilon);
  EXPECT_EQ(j.tail().dominating, t.tail().dominating);
  EXPECT_EQ(c.flat_states(), t.flat_states());
  EXPECT_EQ(c.flat_inputs(), t.flat_inputs());
  // Re-serializing the parsed file reproduces it byte for byte.
  write_trajectory_json(dir + "/u.json", j);
  EXPECT_EQ(read_file(dir + "/t.json"), read_file(dir + "/u.json"));
}

TEST(TrajectoryIo, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(TrajectoryIo, FormatRoundTrips) {
  Rng rng(8);
  for (int i = 0; i < 5000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(rng.below(40)) - 20);
    ASSERT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
}

}  // namespace
}  // namespace trajcert
