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

#include "trajcert/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "trajcert/error.hpp"

namespace trajcert {

LinearProgram::LinearProgram(std::size_t n_vars)
    : n(n_vars),
      objective(n_vars, 0.0),
      lower(n_vars, -std::numeric_limits<double>::infinity()),
      upper(n_vars, std::numeric_limits<double>::infinity()) {
  for (std::size_t j = 0; j < n_vars; ++j) names.push_back("x" + std::to_string(j + 1));
}

void LinearProgram::add_row(std::vector<double> coef, LpSense sense, double rhs) {
  if (coef.size() != n) throw UsageError("LP row length mismatch");
  rows.push_back({std::move(coef), sense, rhs});
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      break;
  }
  return "unbounded";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kPriceTol = 1e-10;
constexpr double kPivotTol = 1e-9;

// Rows g_i^T x >= h_i.
struct GeForm {
  MatrixXd G;
  VectorXd h;
  VectorXd c;
  // Index into LinearProgram::rows, or -1 - 2j (lower bound of j) / -2 - 2j
  // (upper bound of j).
  std::vector<long> origin;
};

GeForm to_ge_form(const LinearProgram& lp) {
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<long> origin;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& r = lp.rows[i];
    if (!std::isfinite(r.rhs)) throw UsageError("LP row rhs must be finite");
    for (double v : r.coef) {
      if (!std::isfinite(v)) throw UsageError("LP coefficient must be finite");
    }
    if (r.sense != LpSense::Le) {
      rows.push_back(r.coef);
      rhs.push_back(r.rhs);
      origin.push_back(static_cast<long>(i));
    }
    if (r.sense != LpSense::Ge) {
      std::vector<double> neg(r.coef);
      for (double& v : neg) v = -v;
      rows.push_back(std::move(neg));
      rhs.push_back(-r.rhs);
      origin.push_back(static_cast<long>(i));
    }
  }
  for (std::size_t j = 0; j < lp.n; ++j) {
    if (std::isfinite(lp.lower[j])) {
      std::vector<double> e(lp.n, 0.0);
      e[j] = 1.0;
      rows.push_back(std::move(e));
      rhs.push_back(lp.lower[j]);
      origin.push_back(-1 - 2 * static_cast<long>(j));
    }
    if (std::isfinite(lp.upper[j])) {
      std::vector<double> e(lp.n, 0.0);
      e[j] = -1.0;
      rows.push_back(std::move(e));
      rhs.push_back(-lp.upper[j]);
      origin.push_back(-2 - 2 * static_cast<long>(j));
    }
  }
  GeForm f;
  f.G.resize(static_cast<long>(rows.size()), static_cast<long>(lp.n));
  f.h.resize(static_cast<long>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < lp.n; ++j) f.G(static_cast<long>(i), static_cast<long>(j)) = rows[i][j];
    f.h(static_cast<long>(i)) = rhs[i];
  }
  f.c.resize(static_cast<long>(lp.n));
  for (std::size_t j = 0; j < lp.n; ++j) f.c(static_cast<long>(j)) = lp.objective[j];
  f.origin = std::move(origin);
  return f;
}

enum class StdStatus { Optimal, Unbounded };

// Revised primal simplex on  max g^T y  s.t.  A y = b, y >= 0  where
// A = [diag(s) G^T | I] (m real columns, n artificial columns).
class DualSimplex {
 public:
  DualSimplex(const MatrixXd& G, const VectorXd& c, const LpOptions& opt)
      : G_(G), m_(G.rows()), n_(G.cols()), s_(n_), b_(n_), opt_(opt) {
    for (long i = 0; i < n_; ++i) {
      s_(i) = c(i) < 0.0 ? -1.0 : 1.0;
      b_(i) = s_(i) * c(i);
    }
    basis_.resize(static_cast<std::size_t>(n_));
    in_basis_.assign(static_cast<std::size_t>(m_ + n_), 0);
    for (long i = 0; i < n_; ++i) {
      basis_[static_cast<std::size_t>(i)] = m_ + i;
      in_basis_[static_cast<std::size_t>(m_ + i)] = 1;
    }
    cap_ = opt.max_iterations ? opt.max_iterations
                              : 50 * static_cast<std::size_t>(m_ + n_) + 1000;
  }

  // Phase 1. Returns the remaining artificial mass.
  double phase1() {
    VectorXd g = VectorXd::Zero(m_ + n_);
    for (long i = 0; i < n_; ++i) g(m_ + i) = -1.0;
    run(g, /*allow_artificial=*/true);
    double mass = 0.0;
    for (long r = 0; r < n_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] >= m_) mass += std::max(0.0, y_(r));
    }
    return mass;
  }

  // Pivots zero-level artificials out where a real column can replace them.
  void drive_out_artificials() {
    for (long r = 0; r < n_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < m_) continue;
      factor();
      VectorXd e = VectorXd::Zero(n_);
      e(r) = 1.0;
      const VectorXd z = luT_.solve(e);  // row r of B^{-1}
      const VectorXd rowv = G_ * s_.cwiseProduct(z);
      long best = -1;
      double best_abs = kPivotTol;
      for (long j = 0; j < m_; ++j) {
        if (in_basis_[static_cast<std::size_t>(j)]) continue;
        if (std::abs(rowv(j)) > best_abs) {
          best_abs = std::abs(rowv(j));
          best = j;
        }
      }
      if (best >= 0) swap_in(r, best);
    }
  }

  StdStatus phase2(const VectorXd& h) {
    VectorXd g = VectorXd::Zero(m_ + n_);
    g.head(m_) = h;
    return run(g, /*allow_artificial=*/false);
  }

  // Primal point x = diag(s) * pi at the current basis for objective h.
  VectorXd primal(const VectorXd& h) {
    factor();
    VectorXd gB(n_);
    for (long r = 0; r < n_; ++r) {
      const long j = basis_[static_cast<std::size_t>(r)];
      gB(r) = j < m_ ? h(j) : 0.0;
    }
    return s_.cwiseProduct(luT_.solve(gB));
  }

  std::size_t iterations() const { return iters_; }

 private:
  VectorXd column(long j) const {
    if (j < m_) return s_.cwiseProduct(G_.row(j).transpose());
    VectorXd e = VectorXd::Zero(n_);
    e(j - m_) = 1.0;
    return e;
  }

  void factor() {
    MatrixXd B(n_, n_);
    for (long r = 0; r < n_; ++r) B.col(r) = column(basis_[static_cast<std::size_t>(r)]);
    lu_.compute(B);
    if (!lu_.isInvertible()) {
      throw NumericalError("simplex basis became singular (rank " +
                           std::to_string(lu_.rank()) + " of " + std::to_string(n_) + ")");
    }
    luT_.compute(B.transpose());
  }

  void swap_in(long r, long j) {
    in_basis_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = 0;
    basis_[static_cast<std::size_t>(r)] = j;
    in_basis_[static_cast<std::size_t>(j)] = 1;
  }

  StdStatus run(const VectorXd& g, bool allow_artificial) {
    std::size_t degenerate = 0;
    bool bland = false;
    while (true) {
      if (++iters_ > cap_) {
        std::ostringstream os;
        os << "simplex iteration cap " << cap_ << " reached (rows " << m_ << ", vars "
           << n_ << ", basis condition ~"
           << (lu_.rank() == n_ ? lu_.rcond() : 0.0) << ")";
        throw NumericalError(os.str());
      }
      factor();
      y_ = lu_.solve(b_);
      VectorXd gB(n_);
      for (long r = 0; r < n_; ++r) gB(r) = g(basis_[static_cast<std::size_t>(r)]);
      const VectorXd pi = luT_.solve(gB);
      const VectorXd prices = G_ * s_.cwiseProduct(pi);

      long enter = -1;
      double best = kPriceTol;
      const long limit = allow_artificial ? m_ + n_ : m_;
      for (long j = 0; j < limit; ++j) {
        if (in_basis_[static_cast<std::size_t>(j)]) continue;
        const double d = j < m_ ? g(j) - prices(j) : g(j) - pi(j - m_);
        if (d > best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter < 0) return StdStatus::Optimal;

      const VectorXd w = lu_.solve(column(enter));
      long leave = -1;
      double theta = 0.0;
      for (long r = 0; r < n_; ++r) {
        if (w(r) <= kPivotTol) continue;
        const double t = std::max(0.0, y_(r)) / w(r);
        if (leave < 0 || t < theta ||
            (t == theta && basis_[static_cast<std::size_t>(r)] <
                               basis_[static_cast<std::size_t>(leave)])) {
          leave = r;
          theta = t;
        }
      }
      if (leave < 0) return StdStatus::Unbounded;
      if (theta <= 1e-14) {
        if (++degenerate >= opt_.degenerate_before_bland) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
      swap_in(leave, enter);
    }
  }

  const MatrixXd& G_;
  long m_, n_;
  VectorXd s_, b_, y_;
  std::vector<long> basis_;
  std::vector<char> in_basis_;
  Eigen::FullPivLU<MatrixXd> lu_, luT_;
  LpOptions opt_;
  std::size_t cap_ = 0;
  std::size_t iters_ = 0;
};

struct CoreResult {
  LpStatus status;
  VectorXd x;
  std::size_t iterations;
};

CoreResult solve_core(const MatrixXd& G, const VectorXd& h, const VectorXd& c,
                      const LpOptions& opt) {
  DualSimplex dx(G, c, opt);
  const double mass = dx.phase1();
  if (mass > opt.feasibility_tol * std::max(1.0, c.lpNorm<Eigen::Infinity>())) {
    // No dual-feasible point: the primal is unbounded or infeasible; the
    // caller decides which with the relaxation problem.
    return {LpStatus::Unbounded, VectorXd(), dx.iterations()};
  }
  dx.drive_out_artificials();
  if (dx.phase2(h) == StdStatus::Unbounded) {
    return {LpStatus::Infeasible, VectorXd(), dx.iterations()};
  }
  return {LpStatus::Optimal, dx.primal(h), dx.iterations()};
}

// min sigma  s.t.  G x + sigma >= h, sigma >= 0. Always feasible and bounded.
struct Relaxation {
  double sigma;
  VectorXd x;
  std::size_t iterations;
};

Relaxation relax(const GeForm& f, const LpOptions& opt) {
  const long m = f.G.rows();
  const long n = f.G.cols();
  MatrixXd G2 = MatrixXd::Zero(m + 1, n + 1);
  G2.topLeftCorner(m, n) = f.G;
  G2.col(n).head(m).setOnes();
  G2(m, n) = 1.0;
  VectorXd h2(m + 1);
  h2.head(m) = f.h;
  h2(m) = 0.0;
  VectorXd c2 = VectorXd::Zero(n + 1);
  c2(n) = 1.0;
  auto r = solve_core(G2, h2, c2, opt);
  if (r.status != LpStatus::Optimal) {
    throw NumericalError("feasibility relaxation did not solve");
  }
  return {std::max(0.0, r.x(n)), r.x.head(n), r.iterations};
}

}  // namespace

SolveResult solve_lp(const LinearProgram& lp, const LpOptions& opt) {
  if (lp.objective.size() != lp.n || lp.lower.size() != lp.n || lp.upper.size() != lp.n) {
    throw UsageError("LP dimensions inconsistent");
  }
  for (std::size_t j = 0; j < lp.n; ++j) {
    if (lp.lower[j] > lp.upper[j]) {
      SolveResult r;
      r.status = LpStatus::Infeasible;
      r.note = "variable " + lp.names[j] + " has lower bound above upper bound";
      return r;
    }
  }
  const GeForm f = to_ge_form(lp);
  SolveResult out;
  if (lp.n == 0) {
    out.status = LpStatus::Optimal;
    for (long i = 0; i < f.h.size(); ++i) {
      if (f.h(i) > opt.feasibility_tol) out.status = LpStatus::Infeasible;
    }
    return out;
  }

  const CoreResult core = solve_core(f.G, f.h, f.c, opt);
  out.iterations = core.iterations;
  if (core.status == LpStatus::Optimal) {
    out.status = LpStatus::Optimal;
    out.x.assign(core.x.data(), core.x.data() + core.x.size());
    out.objective = f.c.dot(core.x);
    const VectorXd slack = f.G * core.x - f.h;
    const double worst = slack.size() ? -slack.minCoeff() : 0.0;
    if (worst > opt.feasibility_tol) {
      std::ostringstream os;
      os << "simplex optimum violates a row by " << worst;
      throw NumericalError(os.str());
    }
    return out;
  }

  const Relaxation rel = relax(f, opt);
  out.iterations += rel.iterations;
  if (core.status == LpStatus::Unbounded && rel.sigma <= opt.feasibility_tol) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  out.status = LpStatus::Infeasible;
  out.infeasibility = rel.sigma;
  const VectorXd slack = f.G * rel.x - f.h;
  std::vector<std::size_t> rows;
  for (long i = 0; i < slack.size(); ++i) {
    if (slack(i) <= -rel.sigma + 1e-9 * (1.0 + std::abs(f.h(i)))) {
      if (f.origin[static_cast<std::size_t>(i)] >= 0) {
        rows.push_back(static_cast<std::size_t>(f.origin[static_cast<std::size_t>(i)]));
      }
    }
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  out.violated_rows = std::move(rows);
  return out;
}

std::string to_lp_format(const LinearProgram& lp) {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto expr = [&](const std::vector<double>& coef) {
    std::string s;
    bool any = false;
    for (std::size_t j = 0; j < coef.size(); ++j) {
      if (coef[j] == 0.0) continue;
      s += (coef[j] < 0 ? " - " : (any ? " + " : " ")) + num(std::abs(coef[j])) + " " +
           lp.names[j];
      any = true;
    }
    return any ? s : std::string(" 0 ") + (lp.names.empty() ? "x1" : lp.names[0]);
  };
  std::string out = "\\ trajcert LP\nMinimize\n obj:" + expr(lp.objective) + "\nSubject To\n";
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& r = lp.rows[i];
    const char* op = r.sense == LpSense::Le ? "<=" : r.sense == LpSense::Ge ? ">=" : "=";
    out += " r" + std::to_string(i) + ":" + expr(r.coef) + " " + op + " " + num(r.rhs) + "\n";
  }
  out += "Bounds\n";
  for (std::size_t j = 0; j < lp.n; ++j) {
    const bool lo = std::isfinite(lp.lower[j]);
    const bool hi = std::isfinite(lp.upper[j]);
    if (!lo && !hi) {
      out += " " + lp.names[j] + " free\n";
    } else {
      out += " " + (lo ? num(lp.lower[j]) : std::string("-inf")) + " <= " + lp.names[j] +
             " <= " + (hi ? num(lp.upper[j]) : std::string("+inf")) + "\n";
    }
  }
  return out + "End\n";
}

}  // namespace trajcert
