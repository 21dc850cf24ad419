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
#include <string>
#include <vector>

#include "lp_oracle.hpp"
#include "support.hpp"
#include "trajcert/error.hpp"
#include "trajcert/lp.hpp"
#include "trajcert/solver.hpp"

namespace trajcert {
namespace {

TEST(SolveLp, Examples) {
  LinearProgram box(1);
  box.add_row({1}, LpSense::Ge, 1);
  box.add_row({1}, LpSense::Le, 2);
  const SolveResult r = solve_lp(box);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_GE(r.x[0], 1.0);
  EXPECT_LE(r.x[0], 2.0);

  LinearProgram lo(1);
  lo.objective = {1};
  lo.add_row({1}, LpSense::Ge, 1);
  const SolveResult s = solve_lp(lo);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_EQ(s.x[0], 1.0);
  EXPECT_EQ(s.objective, 1.0);

  LinearProgram bad(1);
  bad.add_row({1}, LpSense::Ge, 2);
  bad.add_row({1}, LpSense::Le, 1);
  const SolveResult t = solve_lp(bad);
  EXPECT_EQ(t.status, LpStatus::Infeasible);
  EXPECT_NEAR(t.infeasibility, 0.5, 1e-12);
  EXPECT_EQ(t.violated_rows.size(), 2u);
}

TEST(SolveLp, UnboundedAndEquality) {
  LinearProgram u(2);
  u.objective = {-1, 0};
  u.add_row({1, 1}, LpSense::Ge, 1);
  EXPECT_EQ(solve_lp(u).status, LpStatus::Unbounded);

  LinearProgram e(2);
  e.objective = {1, 2};
  e.lower = {0, 0};
  e.add_row({1, 1}, LpSense::Eq, 3);
  const SolveResult r = solve_lp(e);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.x[0], 3.0, 1e-12);
  EXPECT_NEAR(r.x[1], 0.0, 1e-12);
}

TEST(SolveLp, InconsistentBoundsAreInfeasible) {
  LinearProgram lp(1);
  lp.lower = {2};
  lp.upper = {1};
  EXPECT_EQ(solve_lp(lp).status, LpStatus::Infeasible);
}

TEST(SolveLp, DegenerateCycleProneInstance) {
  // A classic cycling example for the largest-coefficient rule.
  LinearProgram lp(4);
  lp.objective = {-0.75, 150, -0.02, 6};
  lp.lower = {0, 0, 0, 0};
  lp.add_row({0.25, -60, -0.04, 9}, LpSense::Le, 0);
  lp.add_row({0.5, -90, -0.02, 3}, LpSense::Le, 0);
  lp.add_row({0, 0, 1, 0}, LpSense::Le, 1);
  const SolveResult r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.objective, -0.05, 1e-12);
}

TEST(SolveLp, AgreesWithVertexOracle) {
  Rng rng(2024);
  int feasible = 0;
  for (int i = 0; i < 150; ++i) {
    const LinearProgram lp = testing::random_lp(rng, 5, 9);
    const testing::OracleResult o = testing::vertex_oracle(lp);
    const SolveResult r = solve_lp(lp);
    ASSERT_EQ(r.status == LpStatus::Optimal, o.feasible) << "instance " << i;
    ASSERT_NE(r.status, LpStatus::Unbounded);
    if (o.feasible) {
      ++feasible;
      ASSERT_NEAR(r.objective, o.objective, 1e-7) << "instance " << i;
    }
  }
  EXPECT_GT(feasible, 20);
}

TEST(SolveLp, DeterministicBitForBit) {
  const auto& ex = testing::example1();
  const LinearProgram lp = certificate_program(ex.cs, LossSpec{LossKind::L1}, SolverOptions{});
  const SolveResult a = solve_lp(lp), b = solve_lp(lp);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(SolveLp, LpFormatSections) {
  LinearProgram lp(2);
  lp.objective = {1, -1};
  lp.lower = {0, -1};
  lp.upper = {std::numeric_limits<double>::infinity(), 4};
  lp.add_row({1, 2}, LpSense::Le, 3);
  lp.add_row({1, 0}, LpSense::Eq, 0.5);
  const std::string s = to_lp_format(lp);
  for (const char* part : {"Minimize", "Subject To", "Bounds", "End", "<= 3", "= 0.5"}) {
    EXPECT_NE(s.find(part), std::string::npos) << part;
  }
}

TEST(SolveRspop, HandToyOptimum) {
  const auto t = testing::traj_1d({4, 3, 2, 1}, 0.0);
  const BasisSet bases = make_robust_bases({t}, {"1"}, {{1.0, 1.0, 0.0}}, 2.0);
  const GridPartition part(BoxRegion::Cube(1, 0, 5), {{0, 1, 2, 3, 4, 4.5, 5}});
  const CoverSets covers = compute_covers(part, RegionSpec({BoxRegion::Cube(1, 0, 1)}),
                                          RegionSpec({BoxRegion::Cube(1, 4.5, 5)}));
  const double d = 1e-6;
  const ConstraintSystem cs = assemble_rspop(bases, part, covers, d);
  const CertSolution sol = solve_rspop(cs, LossSpec{LossKind::L1});
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  // min |a| + b + c  s.t.  a + b/4 + 2c <= 0,  a + 1.75 b >= d:
  // c = 0, a = -b/4 and 1.5 b = d.
  EXPECT_NEAR(sol.p[0], -d / 6, 1e-18);
  EXPECT_NEAR(sol.p[1], 2 * d / 3, 1e-18);
  EXPECT_EQ(sol.p[2], 0.0);
  EXPECT_NEAR(sol.objective, 5 * d / 6, 1e-18);
  EXPECT_TRUE(sol.verify.ok);
}

TEST(SolveRspop, ExampleFeasibleUnderEveryLoss) {
  const auto& ex = testing::example1();
  for (LossKind k : {LossKind::L1, LossKind::Zero, LossKind::SparsitySupportSize}) {
    const CertSolution sol = solve_rspop(ex.cs, LossSpec{k});
    ASSERT_EQ(sol.status, LpStatus::Optimal) << to_string(k);
    EXPECT_TRUE(sol.verify.ok);
    EXPECT_GE(sol.verify.min_unsafe_value, ex.cs.delta_u - kRowTolerance);
  }
  // The L1 optimum uses one lower basis on trajectory 1 and one upper basis
  // on trajectory 2, like the reference certificate.
  const CertSolution l1 = solve_rspop(ex.cs, LossSpec{LossKind::L1});
  EXPECT_LT(l1.p[0], 0.0);
  EXPECT_EQ(l1.p[1], 0.0);
  EXPECT_GT(l1.p[2], 0.0);
  EXPECT_GT(l1.p[3], 0.0);
  EXPECT_EQ(l1.p[4], 0.0);
}

TEST(SolveRspop, CoarseGridIsInfeasibleWithDiagnostics) {
  const auto& ex = testing::example1();
  const GridPartition coarse = build_partition(ex.sys.state_set, 5.0);
  const CoverSets covers = compute_covers(coarse, ex.sys.initial_set, ex.sys.unsafe_set);
  const ConstraintSystem cs = assemble_rspop(ex.bases, coarse, covers, 1e-6);
  const CertSolution sol = solve_rspop(cs, LossSpec{LossKind::L1});
  EXPECT_EQ(sol.status, LpStatus::Infeasible);
  EXPECT_GT(sol.infeasibility, 0.0);
  EXPECT_FALSE(sol.violated_rows.empty());
}

TEST(SolveRspop, CapIsReported) {
  const auto t = testing::traj_1d({4, 3, 2, 1}, 0.0);
  const BasisSet bases = make_robust_bases({t}, {"1"}, {{1.0, 1.0, 0.0}}, 2.0);
  const GridPartition part(BoxRegion::Cube(1, 0, 5), {{0, 1, 2, 3, 4, 4.5, 5}});
  const CoverSets covers = compute_covers(part, RegionSpec({BoxRegion::Cube(1, 0, 1)}),
                                          RegionSpec({BoxRegion::Cube(1, 4.5, 5)}));
  SolverOptions opt;
  opt.coefficient_cap = 1.0;
  // delta_u = 1.5 needs b = 1 exactly, at the cap.
  const ConstraintSystem cs = assemble_rspop(bases, part, covers, 1.5);
  const CertSolution sol = solve_rspop(cs, LossSpec{LossKind::L1}, opt);
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_EQ(sol.cap_active, (std::vector<std::string>{"b1"}));
  const ConstraintSystem too_far = assemble_rspop(bases, part, covers, 2.0);
  EXPECT_EQ(solve_rspop(too_far, LossSpec{LossKind::L1}, opt).status, LpStatus::Infeasible);
}

TEST(Patterns, EnumerationOrderAndMasks) {
  const auto pats = enumerate_patterns(2);
  ASSERT_EQ(pats.size(), 16u);
  EXPECT_EQ(pats.front().size(), 0u);
  EXPECT_EQ(pats.back().size(), 4u);
  for (std::size_t i = 1; i < pats.size(); ++i) EXPECT_LE(pats[i - 1].size(), pats[i].size());
  for (std::uint64_t m = 0; m < 64; ++m) EXPECT_EQ(pattern_mask(pattern_from_mask(m, 3), 3), m);
  EXPECT_EQ(pattern_from_mask(0b0110, 2), (SupportPattern{{1}, {0}}));
}

TEST(SolveCspop, ExamplePatternAndSupport) {
  const auto& ex = testing::example2();
  const PatternAssembler asmb = cached_assembler(ex.problem);
  const CspopResult r = solve_cspop(asmb, 2, LossSpec{LossKind::SparsitySupportSize});
  ASSERT_TRUE(r.pattern.has_value());
  EXPECT_EQ(*r.pattern, (SupportPattern{{0}, {1}}));
  const auto& p = r.solution.p;
  EXPECT_GE(p[1], kDefaultGamma - kRowTolerance);
  EXPECT_GE(p[4], kDefaultGamma - kRowTolerance);
  EXPECT_EQ(p[2], 0.0);
  EXPECT_EQ(p[3], 0.0);
  EXPECT_LT(p[0], 0.0);
  EXPECT_EQ(r.attempts.size(), 11u);  // groups of size 0, 1 and 2
  const CspopResult l1 = solve_cspop(asmb, 2, LossSpec{LossKind::L1});
  ASSERT_TRUE(l1.pattern.has_value());
  EXPECT_EQ(*l1.pattern, (SupportPattern{{0}, {1}}));
  EXPECT_EQ(l1.attempts.size(), 16u);
}

TEST(SolveCspop, CachedAssemblerMatchesDirectAssembly) {
  const auto& ex = testing::example2();
  const PatternAssembler asmb = cached_assembler(ex.problem);
  for (const SupportPattern& pat : {SupportPattern{{0}, {1}}, SupportPattern{},
                                    SupportPattern{{0}, {}}}) {
    const CSpopAssembly a = asmb(pat);
    const CSpopAssembly b = assemble_cspop(ex.bases, ex.policies, ex.part, ex.covers, 1e-6, pat);
    EXPECT_EQ(a.compat.ok, b.compat.ok);
    EXPECT_EQ(a.cs.var_lower, b.cs.var_lower);
    EXPECT_EQ(a.cs.var_upper, b.cs.var_upper);
    ASSERT_EQ(a.cs.rows.size(), b.cs.rows.size());
    for (std::size_t i = 0; i < a.cs.rows.size(); ++i) ASSERT_EQ(a.cs.rows[i].coef, b.cs.rows[i].coef);
  }
  EXPECT_THROW(asmb(SupportPattern{{1}, {}}), RefusalError);
}

TEST(SolveCspop, SerialEqualsParallel) {
  const auto& ex = testing::example2();
  SolverOptions s, p;
  s.exec = Exec::Serial;
  p.exec = Exec::Parallel;
  const PatternAssembler asmb = cached_assembler(ex.problem);
  const CspopResult a = solve_cspop(asmb, 2, LossSpec{LossKind::L1}, s);
  const CspopResult b = solve_cspop(asmb, 2, LossSpec{LossKind::L1}, p);
  EXPECT_EQ(a.solution.p, b.solution.p);
  ASSERT_EQ(a.attempts.size(), b.attempts.size());
  for (std::size_t i = 0; i < a.attempts.size(); ++i) {
    EXPECT_EQ(a.attempts[i].outcome, b.attempts[i].outcome);
  }
}

TEST(SolveCspop, NeitherTailLeavesOnlyTheEmptyPattern) {
  const SystemModel sys = make_traffic(0.01, StateVector{10, 10});
  std::vector<std::shared_ptr<const FeedbackPolicy>> pols{
      std::make_shared<const FeedbackPolicy>(FeedbackPolicy::Constant("pi", {9.0, 0.5}))};
  Trajectory t = Trajectory::FromRows({{1, 2}, {2, 1}});
  t.set_tail(estimate_compact_tail(t, 5));
  const BasisSet bases =
      make_controlled_bases({std::make_shared<const Trajectory>(t)}, {"1"}, pols, 2.0);
  EXPECT_EQ(bases.refusals.size(), 2u);
  const GridPartition part = build_partition(sys.state_set, 1.0);
  const CoverSets covers = compute_covers(part, sys.initial_set, sys.unsafe_set);
  auto problem = std::make_shared<const CspopProblem>(prepare_cspop(bases, pols, part, covers, 1e-6));
  const CspopResult r = solve_cspop(cached_assembler(problem), 1, LossSpec{LossKind::L1});
  EXPECT_FALSE(r.pattern.has_value());
  ASSERT_EQ(r.attempts.size(), 4u);
  EXPECT_EQ(r.attempts[0].outcome.rfind("infeasible", 0), 0u);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(r.attempts[i].outcome.rfind("refused", 0), 0u);
  EXPECT_FALSE(solve_cspop_milp(*problem, LossSpec{LossKind::L1}).pattern.has_value());
}

TEST(SolveCspop, PatternCapAndChecks) {
  const auto& ex = testing::example2();
  SolverOptions opt;
  opt.pattern_cap = 1;
  const PatternAssembler asmb = cached_assembler(ex.problem);
  EXPECT_THROW(solve_cspop(asmb, 2, LossSpec{LossKind::L1}, opt), UsageError);
  const PatternCheck reject = [](const SupportPattern&, const CertSolution&) {
    return std::optional<std::string>("no");
  };
  const CspopResult r = solve_cspop(asmb, 2, LossSpec{LossKind::L1}, {}, reject);
  EXPECT_FALSE(r.pattern.has_value());
  bool saw = false;
  for (const auto& a : r.attempts) saw = saw || a.outcome == "rejected: no";
  EXPECT_TRUE(saw);
  EXPECT_FALSE(solve_cspop_milp(*ex.problem, LossSpec{LossKind::L1}, {}, reject).pattern);
}

TEST(SolveCspopMilp, AgreesWithEnumeration) {
  const auto& ex = testing::example2();
  for (LossKind k : {LossKind::SparsitySupportSize, LossKind::L1}) {
    const CspopResult m = solve_cspop_milp(*ex.problem, LossSpec{k});
    const CspopResult e = solve_cspop(cached_assembler(ex.problem), 2, LossSpec{k});
    ASSERT_TRUE(m.pattern.has_value());
    EXPECT_EQ(*m.pattern, *e.pattern);
    EXPECT_NEAR(m.solution.objective, e.solution.objective, 1e-12);
  }
}

// Random controlled instances on a 1-D system: branch and bound and
// enumeration find equally sparse (or equally cheap) patterns.
TEST(SolveCspopMilp, AgreesWithEnumerationOnRandomInstances) {
  SystemModel sys{"drift",
                  1,
                  1,
                  BoxRegion::Cube(1, 0, 10),
                  RegionSpec({BoxRegion::Cube(1, 4, 6)}),
                  RegionSpec({BoxRegion::Cube(1, 0, 1), BoxRegion::Cube(1, 9, 10)}),
                  BoxRegion::Cube(1, 0, 1),
                  InputRole::Control,
                  [](std::span<const double> x, std::span<const double> u, std::span<double> out) {
                    out[0] = x[0] + 0.2 * (5.0 * u[0] + 2.5 - x[0]) * 0.5;
                  }};
  Rng rng(77);
  const GridPartition part = build_partition(sys.state_set, 0.5);
  const CoverSets covers = compute_covers(part, sys.initial_set, sys.unsafe_set);
  int found = 0;
  for (int inst = 0; inst < 12; ++inst) {
    const std::size_t N = 2 + rng.below(2);
    std::vector<std::shared_ptr<const FeedbackPolicy>> pols;
    std::vector<std::shared_ptr<const Trajectory>> trajs;
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < N; ++k) {
      const double u = rng.uniform(0.1, 0.9);
      pols.push_back(std::make_shared<const FeedbackPolicy>(
          FeedbackPolicy::Constant("p" + std::to_string(k), {u})));
      Trajectory t = simulate(sys, StateVector{rng.uniform(0.2, 9.8)}, PolicyInput{pols.back()},
                              200, 0);
      t.set_tail(estimate_compact_tail(t, 20));
      trajs.push_back(std::make_shared<const Trajectory>(std::move(t)));
      labels.push_back(std::to_string(k + 1));
    }
    const BasisSet bases = make_controlled_bases(trajs, labels, pols, 2.0);
    auto problem =
        std::make_shared<const CspopProblem>(prepare_cspop(bases, pols, part, covers, 1e-6));
    for (LossKind k : {LossKind::SparsitySupportSize, LossKind::L1}) {
      const CspopResult e = solve_cspop(cached_assembler(problem), N, LossSpec{k});
      const CspopResult m = solve_cspop_milp(*problem, LossSpec{k});
      ASSERT_EQ(e.pattern.has_value(), m.pattern.has_value()) << "instance " << inst;
      if (!e.pattern) continue;
      ++found;
      if (k == LossKind::SparsitySupportSize) {
        EXPECT_EQ(e.pattern->size(), m.pattern->size());
      } else {
        EXPECT_NEAR(e.solution.objective, m.solution.objective, 1e-9);
      }
    }
  }
  EXPECT_GT(found, 0);
}

}  // namespace
}  // namespace trajcert
