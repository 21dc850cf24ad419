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

// Small dense linear programs: few variables, many rows.
//
// min c^T x subject to rows and variable bounds. Internally every row and
// finite bound becomes g_i^T x >= h_i and the dual
//   max h^T y  s.t.  G^T y = c, y >= 0
// is solved by a revised primal simplex whose basis is only n x n. The
// simplex multipliers of that dual are the primal point.

#ifndef TRAJCERT_LP_HPP_
#define TRAJCERT_LP_HPP_

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace trajcert {

enum class LpSense { Le, Ge, Eq };

struct LpRow {
  std::vector<double> coef;
  LpSense sense = LpSense::Ge;
  double rhs = 0.0;
};

struct LinearProgram {
  std::size_t n = 0;
  std::vector<double> objective;  // minimized
  std::vector<LpRow> rows;
  std::vector<double> lower;  // -inf allowed
  std::vector<double> upper;  // +inf allowed
  std::vector<std::string> names;

  explicit LinearProgram(std::size_t n_vars = 0);
  void add_row(std::vector<double> coef, LpSense sense, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };
const char* to_string(LpStatus s);

struct LpOptions {
  std::size_t max_iterations = 0;  // 0 = automatic
  std::size_t degenerate_before_bland = 50;
  double feasibility_tol = 1e-9;
};

struct SolveResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
  // Infeasible: minimal uniform relaxation and the LP rows that attain it.
  double infeasibility = 0.0;
  std::vector<std::size_t> violated_rows;
  std::string note;
};

// Throws NumericalError on iteration cap or an unrecoverable singular basis.
SolveResult solve_lp(const LinearProgram& lp, const LpOptions& opt = {});

// CPLEX-style LP text for cross-checking with external solvers.
std::string to_lp_format(const LinearProgram& lp);

}  // namespace trajcert

#endif  // TRAJCERT_LP_HPP_
