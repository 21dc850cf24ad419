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


#include "trajcert/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <sstream>

#include "trajcert/error.hpp"

namespace trajcert {

const char* to_string(LossKind k) {
  switch (k) {
    case LossKind::Zero:
      return "zero";
    case LossKind::L1:
      return "l1";
    case LossKind::SparsitySupportSize:
      break;
  }
  return "sparsity";
}

LossKind loss_from_string(const std::string& s) {
  if (s == "zero") return LossKind::Zero;
  if (s == "l1") return LossKind::L1;
  if (s == "sparsity") return LossKind::SparsitySupportSize;
  throw UsageError("unknown loss '" + s + "' (zero, l1, sparsity)");
}

LinearProgram certificate_program(const ConstraintSystem& cs, LossSpec loss,
                                  const SolverOptions& opt,
                                  const std::vector<double>& floors) {
  const std::size_t nv = cs.n_vars();
  if (!floors.empty() && floors.size() != nv) throw UsageError("floor vector length");
  if (!(opt.coefficient_cap > 0.0)) throw UsageError("coefficient cap must be > 0");
  LinearProgram lp(nv + 1);
  lp.names[0] = "a_pos";
  lp.names[1] = "a_neg";
  for (std::size_t v = 1; v < nv; ++v) lp.names[v + 1] = cs.var_names[v];
  const double w = loss.kind == LossKind::Zero ? 0.0 : 1.0;
  std::fill(lp.objective.begin(), lp.objective.end(), w);
  lp.lower[0] = lp.lower[1] = 0.0;
  lp.upper[0] = lp.upper[1] = opt.coefficient_cap;
  for (std::size_t v = 1; v < nv; ++v) {
    const double fl = floors.empty() ? 0.0 : floors[v];
    lp.lower[v + 1] = std::max({cs.var_lower[v], 0.0, fl});
    lp.upper[v + 1] = std::min(cs.var_upper[v], opt.coefficient_cap);
  }
  for (const auto& row : cs.rows) {
    std::vector<double> coef(nv + 1);
    coef[0] = row.coef[0];
    coef[1] = -row.coef[0];
    for (std::size_t v = 1; v < nv; ++v) coef[v + 1] = row.coef[v];
    lp.add_row(std::move(coef), row.sense == Sense::Le ? LpSense::Le : LpSense::Ge, row.rhs);
  }
  for (int side = 0; side < 2; ++side) {
    const double bound = side == 0 ? cs.var_lower[0] : cs.var_upper[0];
    if (!std::isfinite(bound)) continue;
    std::vector<double> coef(nv + 1, 0.0);
    coef[0] = 1.0;
    coef[1] = -1.0;
    lp.add_row(std::move(coef), side == 0 ? LpSense::Ge : LpSense::Le, bound);
  }
  return lp;
}

namespace {

CertSolution solve_program(const ConstraintSystem& cs, const LinearProgram& lp,
                           const SolverOptions& opt) {
  const SolveResult r = solve_lp(lp, opt.lp);
  CertSolution out;
  out.status = r.status;
  out.iterations = r.iterations;
  out.note = r.note;
  if (r.status == LpStatus::Infeasible) {
    out.infeasibility = r.infeasibility;
    for (auto i : r.violated_rows) {
      if (i < cs.rows.size()) out.violated_rows.push_back(i);
    }
    return out;
  }
  if (r.status != LpStatus::Optimal) return out;
  const std::size_t nv = cs.n_vars();
  out.p.resize(nv);
  out.p[0] = r.x[0] - r.x[1];
  for (std::size_t v = 1; v < nv; ++v) out.p[v] = r.x[v + 1];
  // Round-off residue on nonbasic or degenerate coefficients.
  for (std::size_t v = 0; v < nv; ++v) {
    if (std::abs(out.p[v]) < 1e-15 && cs.var_lower[v] <= 0.0 && cs.var_upper[v] >= 0.0) {
      out.p[v] = 0.0;
    }
  }
  out.objective = r.objective;
  for (std::size_t v = 0; v < nv; ++v) {
    if (std::abs(out.p[v]) >= opt.coefficient_cap - 1e-9) out.cap_active.push_back(cs.var_names[v]);
  }
  out.verify = verify_rows(cs, out.p);
  if (!out.verify.ok) {
    std::ostringstream os;
    os << "LP optimum failed re-verification: " << out.verify.violations
       << " rows violated, worst " << out.verify.worst_violation;
    throw NumericalError(os.str());
  }
  return out;
}

}  // namespace

CertSolution solve_rspop(const ConstraintSystem& cs, LossSpec loss, const SolverOptions& opt) {
  return solve_program(cs, certificate_program(cs, loss, opt), opt);
}

// ---------------------------------------------------------------- patterns

SupportPattern pattern_from_mask(std::uint64_t mask, std::size_t N) {
  SupportPattern s;
  for (std::size_t k = 0; k < N; ++k) {
    if (mask >> k & 1u) s.Kp.push_back(k);
  }
  for (std::size_t k = 0; k < N; ++k) {
    if (mask >> (N + k) & 1u) s.Kq.push_back(k);
  }
  return s;
}

std::uint64_t pattern_mask(const SupportPattern& s, std::size_t N) {
  std::uint64_t m = 0;
  for (auto k : s.Kp) m |= std::uint64_t{1} << k;
  for (auto k : s.Kq) m |= std::uint64_t{1} << (N + k);
  return m;
}

std::vector<SupportPattern> enumerate_patterns(std::size_t N) {
  if (2 * N >= 63) throw UsageError("too many trajectories to enumerate patterns");
  std::vector<std::uint64_t> masks(std::uint64_t{1} << (2 * N));
  for (std::uint64_t m = 0; m < masks.size(); ++m) masks[m] = m;
  std::stable_sort(masks.begin(), masks.end(), [](std::uint64_t x, std::uint64_t y) {
    return std::popcount(x) < std::popcount(y);
  });
  std::vector<SupportPattern> out;
  out.reserve(masks.size());
  for (auto m : masks) out.push_back(pattern_from_mask(m, N));
  return out;
}

namespace {

struct Evaluated {
  PatternAttempt attempt;
  std::optional<CertSolution> solution;
};

std::string compat_reason(const CompatibilityReport& c) {
  std::ostringstream os;
  os << "incompatible: policy ordering fails on " << c.failing << " of " << c.cells_checked
     << " cells";
  if (!c.failing_cells.empty()) os << " (first cell " << c.failing_cells.front() << ")";
  return os.str();
}

Evaluated evaluate_pattern(const PatternAssembler& assembler, const SupportPattern& pattern,
                           LossSpec loss, const SolverOptions& opt) {
  Evaluated e;
  e.attempt.pattern = pattern;
  try {
    const CSpopAssembly as = assembler(pattern);
    if (!as.compat.ok) {
      e.attempt.outcome = compat_reason(as.compat);
      return e;
    }
    const std::size_t N = as.cs.N;
    std::vector<double> floors(as.cs.n_vars(), 0.0);
    for (auto k : pattern.Kp) floors[1 + k] = opt.gamma;
    for (auto k : pattern.Kq) floors[1 + N + k] = opt.gamma;
    CertSolution sol = solve_program(as.cs, certificate_program(as.cs, loss, opt, floors), opt);
    if (sol.status == LpStatus::Optimal) {
      e.attempt.outcome = "optimal";
      e.attempt.objective = sol.objective;
      e.solution = std::move(sol);
    } else if (sol.status == LpStatus::Infeasible) {
      std::ostringstream os;
      os << "infeasible: minimal uniform relaxation " << sol.infeasibility << " on "
         << sol.violated_rows.size() << " rows";
      e.attempt.outcome = os.str();
    } else {
      e.attempt.outcome = "unbounded";
    }
  } catch (const RefusalError& ex) {
    e.attempt.outcome = std::string("refused: ") + ex.what();
  } catch (const NumericalError& ex) {
    e.attempt.outcome = std::string("numerical: ") + ex.what();
  }
  return e;
}

void apply_check(Evaluated& e, const PatternCheck& check) {
  if (!e.solution || !check) return;
  if (auto why = check(e.attempt.pattern, *e.solution)) {
    e.attempt.outcome = "rejected: " + *why;
    e.attempt.objective.reset();
    e.solution.reset();
  }
}

}  // namespace

CspopResult solve_cspop(const PatternAssembler& assembler, std::size_t N, LossSpec loss,
                        const SolverOptions& opt, const PatternCheck& check) {
  if (N == 0) throw UsageError("no trajectories");
  if (N > opt.pattern_cap) {
    throw UsageError("N = " + std::to_string(N) + " exceeds the pattern enumeration cap " +
                     std::to_string(opt.pattern_cap) + "; use the MILP search");
  }
  const auto patterns = enumerate_patterns(N);
  CspopResult out;
  std::optional<std::size_t> best;
  std::vector<Evaluated> evaluated;
  std::size_t begin = 0;
  while (begin < patterns.size()) {
    std::size_t end = begin;
    while (end < patterns.size() && patterns[end].size() == patterns[begin].size()) ++end;
    std::vector<Evaluated> group(end - begin);
    std::vector<std::exception_ptr> errors(group.size());
    const auto count = static_cast<std::ptrdiff_t>(group.size());
    auto body = [&](std::ptrdiff_t i) {
      try {
        group[i] = evaluate_pattern(assembler, patterns[begin + i], loss, opt);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    };
    if (opt.exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
      for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
    } else {
      for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
    }
    for (auto& ex : errors) {
      if (ex) std::rethrow_exception(ex);
    }
    for (auto& e : group) {
      apply_check(e, check);
      const std::size_t idx = evaluated.size();
      if (e.solution &&
          (!best || e.solution->objective < evaluated[*best].solution->objective)) {
        best = idx;
      }
      evaluated.push_back(std::move(e));
    }
    if (best && loss.kind == LossKind::SparsitySupportSize) break;
    begin = end;
  }
  for (auto& e : evaluated) out.attempts.push_back(e.attempt);
  if (best) {
    out.solution = std::move(*evaluated[*best].solution);
    out.pattern = evaluated[*best].attempt.pattern;
  } else {
    out.solution.status = LpStatus::Infeasible;
    out.solution.note = "all " + std::to_string(evaluated.size()) + " support patterns failed";
  }
  return out;
}

CspopResult solve_pattern(const PatternAssembler& assembler, const SupportPattern& pattern,
                          LossSpec loss, const SolverOptions& opt, const PatternCheck& check) {
  Evaluated e = evaluate_pattern(assembler, pattern, loss, opt);
  apply_check(e, check);
  CspopResult out;
  out.attempts.push_back(e.attempt);
  if (e.solution) {
    out.solution = std::move(*e.solution);
    out.pattern = pattern;
  } else {
    out.solution.status = LpStatus::Infeasible;
    out.solution.note = "pattern " + to_string(pattern) + " failed";
  }
  return out;
}

CspopProblem prepare_cspop(const BasisSet& bases,
                           const std::vector<std::shared_ptr<const FeedbackPolicy>>& policies,
                           const GridPartition& part, const CoverSets& covers,
                           double delta_u, Exec exec) {
  CSpopAssembly as = assemble_cspop(bases, policies, part, covers, delta_u, {}, exec);
  const double inf = std::numeric_limits<double>::infinity();
  std::fill(as.cs.var_lower.begin(), as.cs.var_lower.end(), -inf);
  std::fill(as.cs.var_upper.begin(), as.cs.var_upper.end(), inf);
  return CspopProblem{std::move(as.cs), bases, policies, part,
                      pairwise_compatibility(policies, part, exec)};
}

PatternAssembler cached_assembler(std::shared_ptr<const CspopProblem> problem) {
  return [problem](const SupportPattern& pattern) {
    const CspopProblem& pr = *problem;
    const std::size_t N = pr.cs.N;
    for (auto k : pattern.Kp) {
      if (k >= N) throw UsageError("pattern index out of range");
      if (!pr.bases.upper[k]) {
        throw RefusalError("trajectory " + pr.bases.labels[k] +
                           ": controlled upper basis refused (tail is not upper dominating)");
      }
    }
    for (auto k : pattern.Kq) {
      if (k >= N) throw UsageError("pattern index out of range");
      if (!pr.bases.lower[k]) {
        throw RefusalError("trajectory " + pr.bases.labels[k] +
                           ": controlled lower basis refused (tail is not lower dominating)");
      }
    }
    CSpopAssembly as;
    bool pairs_ok = true;
    for (auto p : pattern.Kp) {
      for (auto q : pattern.Kq) pairs_ok = pairs_ok && pr.compat[p][q];
    }
    if (pairs_ok) {
      as.compat.ok = true;
      as.compat.cells_checked =
          pattern.Kp.empty() || pattern.Kq.empty() ? 0 : pr.part.num_cells();
    } else {
      as.compat = check_compatibility(pattern, pr.policies, pr.part, Exec::Serial);
    }
    as.cs = pr.cs;
    for (std::size_t k = 0; k < N; ++k) {
      if (std::find(pattern.Kp.begin(), pattern.Kp.end(), k) == pattern.Kp.end()) {
        as.cs.var_lower[1 + k] = as.cs.var_upper[1 + k] = 0.0;
      }
      if (std::find(pattern.Kq.begin(), pattern.Kq.end(), k) == pattern.Kq.end()) {
        as.cs.var_lower[1 + N + k] = as.cs.var_upper[1 + N + k] = 0.0;
      }
    }
    return as;
  };
}

// ---------------------------------------------------------- branch and bound

CspopResult solve_cspop_milp(const CspopProblem& problem, LossSpec loss,
                             const SolverOptions& opt, const PatternCheck& check) {
  const ConstraintSystem& cs = problem.cs;
  const std::size_t N = cs.N;
  if (N == 0) throw UsageError("no trajectories");
  const double M = opt.coefficient_cap;
  const LossSpec relax_loss{loss.kind == LossKind::L1 ? LossKind::L1 : LossKind::Zero};
  LinearProgram base = certificate_program(cs, relax_loss, opt);
  const std::size_t n0 = base.n;
  const std::size_t nz = 2 * N;
  base.n = n0 + nz;
  for (auto& row : base.rows) row.coef.resize(base.n, 0.0);
  for (std::size_t i = 0; i < nz; ++i) {
    const bool upper = i < N;
    const std::size_t k = upper ? i : i - N;
    base.objective.push_back(loss.kind == LossKind::SparsitySupportSize ? 1.0 : 0.0);
    base.lower.push_back(0.0);
    const bool refused = upper ? !problem.bases.upper[k] : !problem.bases.lower[k];
    base.upper.push_back(refused ? 0.0 : 1.0);
    base.names.push_back((upper ? "zb" : "zc") + std::to_string(k + 1));
  }
  for (std::size_t i = 0; i < nz; ++i) {
    const std::size_t var = 2 + i;  // b_1..b_N, c_1..c_N in the LP layout
    std::vector<double> le(base.n, 0.0), ge(base.n, 0.0);
    le[var] = 1.0;
    le[n0 + i] = -M;
    base.add_row(std::move(le), LpSense::Le, 0.0);
    ge[var] = 1.0;
    ge[n0 + i] = -opt.gamma;
    base.add_row(std::move(ge), LpSense::Ge, 0.0);
  }
  for (std::size_t p = 0; p < N; ++p) {
    for (std::size_t q = 0; q < N; ++q) {
      if (problem.compat[p][q]) continue;
      std::vector<double> row(base.n, 0.0);
      row[n0 + p] = 1.0;
      row[n0 + N + q] = 1.0;
      base.add_row(std::move(row), LpSense::Le, 1.0);
    }
  }

  const PatternAssembler assembler =
      cached_assembler(std::make_shared<const CspopProblem>(problem));
  struct Node {
    std::vector<double> lo, hi;
  };
  std::vector<Node> stack;
  stack.push_back({std::vector<double>(nz, 0.0),
                   std::vector<double>(base.upper.begin() + static_cast<long>(n0), base.upper.end())});
  CspopResult out;
  std::optional<Evaluated> best;
  double incumbent = std::numeric_limits<double>::infinity();
  std::size_t nodes = 0;
  std::string note;
  while (!stack.empty()) {
    if (++nodes > opt.milp_node_limit) {
      if (!best) throw NumericalError("branch-and-bound node limit reached without a certificate");
      note = "node limit reached; best pattern so far returned";
      break;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    LinearProgram lp = base;
    for (std::size_t i = 0; i < nz; ++i) {
      lp.lower[n0 + i] = node.lo[i];
      lp.upper[n0 + i] = node.hi[i];
    }
    const SolveResult r = solve_lp(lp, opt.lp);
    if (r.status != LpStatus::Optimal) continue;
    if (r.objective >= incumbent - 1e-9) continue;
    std::optional<std::size_t> branch;
    double frac_best = 1e-6;
    for (std::size_t i = 0; i < nz; ++i) {
      const double v = r.x[n0 + i];
      const double frac = std::min(v, 1.0 - v);
      if (frac > frac_best) {
        frac_best = frac;
        branch = i;
      }
    }
    if (branch) {
      Node one = node, zero = node;
      one.lo[*branch] = 1.0;
      zero.hi[*branch] = 0.0;
      stack.push_back(std::move(one));
      stack.push_back(std::move(zero));
      continue;
    }
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < nz; ++i) {
      if (r.x[n0 + i] > 0.5) mask |= std::uint64_t{1} << i;
    }
    const SupportPattern pattern = pattern_from_mask(mask, N);
    Evaluated e = evaluate_pattern(assembler, pattern, loss, opt);
    apply_check(e, check);
    out.attempts.push_back(e.attempt);
    if (!e.solution) {
      // No-good cut: sum_{i in S} (1 - z_i) + sum_{i not in S} z_i >= 1.
      std::vector<double> row(base.n, 0.0);
      double rhs = 1.0;
      for (std::size_t i = 0; i < nz; ++i) {
        const bool in = mask >> i & 1u;
        row[n0 + i] = in ? -1.0 : 1.0;
        if (in) rhs -= 1.0;
      }
      base.add_row(std::move(row), LpSense::Ge, rhs);
      stack.push_back(std::move(node));
      continue;
    }
    const double value = loss.kind == LossKind::SparsitySupportSize
                             ? static_cast<double>(pattern.size())
                             : e.solution->objective;
    if (value < incumbent) {
      incumbent = value;
      best = std::move(e);
    }
  }
  if (best) {
    out.solution = std::move(*best->solution);
    out.pattern = best->attempt.pattern;
    out.solution.note = note;
  } else {
    out.solution.status = LpStatus::Infeasible;
    out.solution.note = "branch and bound found no admissible pattern";
  }
  return out;
}

}  // namespace trajcert
