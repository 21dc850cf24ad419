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


// Shared fixtures: the two reference pipelines built through the library API,
// and scratch directories.

#ifndef TRAJCERT_TESTS_SUPPORT_HPP_
#define TRAJCERT_TESTS_SUPPORT_HPP_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trajcert/certify.hpp"
#include "trajcert/rng.hpp"
#include "trajcert/solver.hpp"
#include "trajcert/systems.hpp"

namespace trajcert::testing {

inline std::string scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("trajcert_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

inline std::string source_dir() { return TRAJCERT_SOURCE_DIR; }

inline std::shared_ptr<const Trajectory> traj_1d(std::vector<double> v,
                                                 std::optional<double> eps = std::nullopt) {
  std::vector<std::vector<double>> rows;
  for (double x : v) rows.push_back({x});
  Trajectory t = Trajectory::FromRows(rows);
  TailInfo tail = estimate_compact_tail(t, 1);
  tail.epsilon = eps;
  t.set_tail(tail);
  return std::make_shared<const Trajectory>(std::move(t));
}

struct RobustExample {
  SystemModel sys;
  std::vector<std::shared_ptr<const Trajectory>> trajs;
  LipschitzBounds lips;
  BasisSet bases;
  GridPartition part;
  CoverSets covers;
  ConstraintSystem cs;
};

inline constexpr std::uint64_t kExampleSeed = 20260101;

inline const RobustExample& example1() {
  static const RobustExample ex = [] {
    SystemModel sys = make_lotka_volterra(0.2);
    std::vector<std::shared_ptr<const Trajectory>> trajs;
    const std::vector<StateVector> starts{StateVector{1.46, 0.84, 0.67, 1.59, 0.78},
                                          StateVector{8.65, 9.74, 8.83, 9.17, 9.61}};
    for (std::size_t k = 0; k < starts.size(); ++k) {
      Trajectory t = simulate(sys, starts[k], NoInput{}, 400, derive_seed(kExampleSeed, k, kDataSalt));
      t.set_tail(estimate_compact_tail(t, 50));
      trajs.push_back(std::make_shared<const Trajectory>(std::move(t)));
    }
    const LipschitzBounds lips{1.2, 1.0, 0.0};
    BasisSet bases = make_robust_bases(trajs, {"1", "2"}, {lips, lips}, 2.0);
    GridPartition part = build_aligned_partition(sys.state_set, 0.5);
    CoverSets covers = compute_covers(part, sys.initial_set, sys.unsafe_set);
    ConstraintSystem cs = assemble_rspop(bases, part, covers, 1e-6);
    return RobustExample{std::move(sys), std::move(trajs), lips, std::move(bases),
                         std::move(part), std::move(covers), std::move(cs)};
  }();
  return ex;
}

struct ControlledExample {
  SystemModel sys;
  std::vector<std::shared_ptr<const FeedbackPolicy>> policies;
  std::vector<std::shared_ptr<const Trajectory>> trajs;
  BasisSet bases;
  GridPartition part;
  CoverSets covers;
  std::shared_ptr<const CspopProblem> problem;
};

inline const ControlledExample& example2() {
  static const ControlledExample ex = [] {
    SystemModel sys = make_traffic(0.01, StateVector{10.0, 10.0});
    std::vector<std::shared_ptr<const FeedbackPolicy>> policies{
        std::make_shared<const FeedbackPolicy>(FeedbackPolicy::Constant("pi1", {9.0, 0.6})),
        std::make_shared<const FeedbackPolicy>(FeedbackPolicy::Constant("pi2", {9.0, 0.5}))};
    const std::vector<StateVector> starts{StateVector{9.5, 9.9}, StateVector{0.1, 0.3}};
    std::vector<std::shared_ptr<const Trajectory>> trajs;
    for (std::size_t k = 0; k < 2; ++k) {
      Trajectory t = simulate(sys, starts[k], PolicyInput{policies[k]}, 1000, 0);
      t.set_tail(estimate_compact_tail(t, 50));
      trajs.push_back(std::make_shared<const Trajectory>(std::move(t)));
    }
    BasisSet bases = make_controlled_bases(trajs, {"1", "2"}, policies, 2.0);
    GridPartition part = build_partition(sys.state_set, 1.0);
    CoverSets covers = compute_covers(part, sys.initial_set, sys.unsafe_set);
    auto problem = std::make_shared<const CspopProblem>(
        prepare_cspop(bases, policies, part, covers, 1e-6));
    return ControlledExample{std::move(sys), std::move(policies), std::move(trajs),
                             std::move(bases), std::move(part), std::move(covers),
                             std::move(problem)};
  }();
  return ex;
}

}  // namespace trajcert::testing

#endif  // TRAJCERT_TESTS_SUPPORT_HPP_
