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


// Brute-force LP reference: every vertex of a bounded feasible region is the
// unique solution of some n active constraints, so the optimum is the best
// feasible vertex among all n-subsets of rows and bounds.

#ifndef TRAJCERT_TESTS_LP_ORACLE_HPP_
#define TRAJCERT_TESTS_LP_ORACLE_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "trajcert/lp.hpp"
#include "trajcert/rng.hpp"

namespace trajcert::testing {

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
};

// Requires finite bounds on every variable.
inline OracleResult vertex_oracle(const LinearProgram& lp, double tol = 1e-9) {
  const std::size_t n = lp.n;
  std::vector<std::vector<double>> planes;
  std::vector<double> rhs;
  for (const auto& r : lp.rows) {
    planes.push_back(r.coef);
    rhs.push_back(r.rhs);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    planes.push_back(e);
    rhs.push_back(lp.lower[j]);
    planes.push_back(e);
    rhs.push_back(lp.upper[j]);
  }
  auto feasible = [&](const Eigen::VectorXd& x) {
    for (std::size_t j = 0; j < n; ++j) {
      if (x(j) < lp.lower[j] - tol || x(j) > lp.upper[j] + tol) return false;
    }
    for (const auto& r : lp.rows) {
      double v = 0.0;
      for (std::size_t j = 0; j < n; ++j) v += r.coef[j] * x(j);
      const double scale = 1.0 + std::abs(r.rhs);
      if (r.sense == LpSense::Le && v > r.rhs + tol * scale) return false;
      if (r.sense == LpSense::Ge && v < r.rhs - tol * scale) return false;
      if (r.sense == LpSense::Eq && std::abs(v - r.rhs) > tol * scale) return false;
    }
    return true;
  };
  OracleResult best;
  best.objective = std::numeric_limits<double>::infinity();
  const std::size_t P = planes.size();
  std::vector<std::size_t> pick(n);
  for (std::size_t i = 0; i < n; ++i) pick[i] = i;
  Eigen::MatrixXd A(n, n);
  Eigen::VectorXd b(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) A(i, j) = planes[pick[i]][j];
      b(i) = rhs[pick[i]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() == static_cast<Eigen::Index>(n)) {
      const Eigen::VectorXd x = lu.solve(b);
      if (feasible(x)) {
        double obj = 0.0;
        for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * x(j);
        best.feasible = true;
        best.objective = std::min(best.objective, obj);
      }
    }
    // Next n-combination of P in lexicographic order.
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == P - n + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t k = i; k < n; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

// Small integer-data LP with every variable boxed, so it is never unbounded.
inline LinearProgram random_lp(Rng& rng, std::size_t max_vars = 6, std::size_t max_rows = 12) {
  const std::size_t n = 1 + rng.below(max_vars);
  const std::size_t m = 1 + rng.below(max_rows);
  LinearProgram lp(n);
  for (std::size_t j = 0; j < n; ++j) {
    lp.objective[j] = static_cast<double>(rng.below(11)) - 5.0;
    lp.lower[j] = rng.below(2) ? 0.0 : -static_cast<double>(1 + rng.below(10));
    lp.upper[j] = static_cast<double>(1 + rng.below(10));
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> coef(n);
    for (auto& c : coef) c = static_cast<double>(rng.below(11)) - 5.0;
    const auto pick = rng.below(10);
    const LpSense sense = pick == 0 ? LpSense::Eq : pick < 5 ? LpSense::Le : LpSense::Ge;
    lp.add_row(std::move(coef), sense, static_cast<double>(rng.below(21)) - 10.0);
  }
  return lp;
}

}  // namespace trajcert::testing

#endif  // TRAJCERT_TESTS_LP_ORACLE_HPP_
