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


// Certificate search: the robust program is one LP; the controlled program is
// a search over support patterns, each an LP with out-of-pattern coefficients
// pinned to zero and in-pattern coefficients floored at gamma.

#ifndef TRAJCERT_SOLVER_HPP_
#define TRAJCERT_SOLVER_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trajcert/certify.hpp"
#include "trajcert/lp.hpp"
#include "trajcert/parallel.hpp"

namespace trajcert {

enum class LossKind { Zero, L1, SparsitySupportSize };
const char* to_string(LossKind k);
LossKind loss_from_string(const std::string& s);

struct LossSpec {
  LossKind kind = LossKind::L1;
};

inline constexpr double kDefaultCoefficientCap = 1e3;
inline constexpr std::size_t kDefaultPatternCap = 10;

struct SolverOptions {
  double coefficient_cap = kDefaultCoefficientCap;
  double gamma = kDefaultGamma;
  std::size_t pattern_cap = kDefaultPatternCap;
  std::size_t milp_node_limit = 200000;
  Exec exec = Exec::Parallel;
  LpOptions lp;
};

struct CertSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> p;  // (a, b_1..b_N, c_1..c_N) when Optimal
  double objective = 0.0;
  std::size_t iterations = 0;
  // Names of coefficients sitting at the cap.
  std::vector<std::string> cap_active;
  // Infeasible: constraint-system rows attaining the minimal relaxation.
  std::vector<std::size_t> violated_rows;
  double infeasibility = 0.0;
  VerifyReport verify;
  std::string note;
};

// The LP actually handed to the simplex: variables (a+, a-, b_1.., c_1..),
// rows copied from cs in order, coefficients capped, floors applied.
LinearProgram certificate_program(const ConstraintSystem& cs, LossSpec loss,
                                  const SolverOptions& opt,
                                  const std::vector<double>& floors = {});

// Solves the robust program. Optimal results are re-verified against every
// row; a failed re-verification throws NumericalError.
CertSolution solve_rspop(const ConstraintSystem& cs, LossSpec loss,
                         const SolverOptions& opt = {});

// One pattern's assembled program. Throws RefusalError for refused bases.
using PatternAssembler = std::function<CSpopAssembly(const SupportPattern&)>;
// Extra acceptance test on an Optimal pattern (e.g. controller-set
// nonemptiness); returns a failure reason or nothing.
using PatternCheck =
    std::function<std::optional<std::string>(const SupportPattern&, const CertSolution&)>;

struct PatternAttempt {
  SupportPattern pattern;
  std::string outcome;  // "optimal", "refused: ..", "incompatible: ..", ...
  std::optional<double> objective;
};

struct CspopResult {
  CertSolution solution;
  std::optional<SupportPattern> pattern;
  std::vector<PatternAttempt> attempts;
};

// Pattern masks: bit k puts trajectory k in Kp, bit N+k puts it in Kq.
SupportPattern pattern_from_mask(std::uint64_t mask, std::size_t N);
std::uint64_t pattern_mask(const SupportPattern& s, std::size_t N);
// All 2^(2N) patterns ordered by size, then mask.
std::vector<SupportPattern> enumerate_patterns(std::size_t N);

// Enumerates patterns by increasing size. SparsitySupportSize returns the
// first Optimal pattern; other losses return the least objective, ties to
// the earliest pattern.
CspopResult solve_cspop(const PatternAssembler& assembler, std::size_t N, LossSpec loss,
                        const SolverOptions& opt = {}, const PatternCheck& check = {});

// A single prescribed pattern, with the same checks as one enumeration step.
CspopResult solve_pattern(const PatternAssembler& assembler, const SupportPattern& pattern,
                          LossSpec loss, const SolverOptions& opt = {},
                          const PatternCheck& check = {});

// Everything needed to produce any pattern's program without reassembling
// rows: the unpinned rows, per-basis refusals and pairwise compatibility.
struct CspopProblem {
  ConstraintSystem cs;
  BasisSet bases;
  std::vector<std::shared_ptr<const FeedbackPolicy>> policies;
  GridPartition part;
  std::vector<std::vector<bool>> compat;
};

CspopProblem prepare_cspop(const BasisSet& bases,
                           const std::vector<std::shared_ptr<const FeedbackPolicy>>& policies,
                           const GridPartition& part, const CoverSets& covers,
                           double delta_u, Exec exec = Exec::Parallel);
// Same results as assemble_cspop, from the prepared rows.
PatternAssembler cached_assembler(std::shared_ptr<const CspopProblem> problem);

// Big-M branch and bound over pattern indicators z (upper) and y (lower):
// gamma*z <= b <= M*z with M the coefficient cap, refused bases forced to 0,
// and z_p + y_q <= 1 for incompatible policy pairs. Depth first, branching on
// the most fractional indicator, 0-branch first. Candidate patterns are
// re-solved as pattern LPs; a failed check adds a no-good cut.
CspopResult solve_cspop_milp(const CspopProblem& problem, LossSpec loss,
                             const SolverOptions& opt = {}, const PatternCheck& check = {});

}  // namespace trajcert

#endif  // TRAJCERT_SOLVER_HPP_
