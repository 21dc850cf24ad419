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

#include "trajcert/dominance.hpp"

#include <algorithm>
#include <cmath>

#include "trajcert/error.hpp"

namespace trajcert {

InflationSchedule lambda_schedule(const LipschitzBounds& lip, std::size_t T) {
  if (T < 1) throw UsageError("lambda_schedule needs T >= 1");
  lip.validate();
  std::vector<double> lambda(T);
  const double scale = lip.L_w * lip.D_w;
  double prev = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    double geom;
    if (lip.L_x == 1.0) {
      geom = static_cast<double>(t + 1);
    } else {
      geom = (1.0 - std::pow(lip.L_x, static_cast<double>(t + 1))) / (1.0 - lip.L_x);
    }
    // Guard the nondecreasing invariant against last-bit rounding.
    prev = std::max(prev, scale * geom);
    lambda[t] = prev;
  }
  return InflationSchedule(lip, std::move(lambda));
}

InflationSchedule zero_schedule(std::size_t T) {
  return InflationSchedule(LipschitzBounds{1.0, 1.0, 0.0},
                           std::vector<double>(std::max<std::size_t>(T, 1), 0.0));
}

double dominance_value(const DominanceTime& time, double alpha) {
  switch (time.kind) {
    case DominanceTime::Case::Finite:
      return 1.0 / (static_cast<double>(time.t) + 1.0);
    case DominanceTime::Case::Infinite:
      return 0.0;
    case DominanceTime::Case::Empty:
      break;
  }
  return alpha;
}

namespace {

void check_query(const Trajectory& traj, std::span<const double> x) {
  if (x.size() != traj.dim()) throw UsageError("query dimension mismatch");
}

void check_schedule(const Trajectory& traj, const InflationSchedule& infl) {
  if (traj.horizon() > 0 && infl.size() < traj.horizon()) {
    throw UsageError("inflation schedule shorter than the trajectory horizon");
  }
}

// Largest t in [0, last] with q <= x(t) + lambda_{t-1} componentwise.
DominanceTime scan_upper(const Trajectory& traj, const InflationSchedule* infl,
                         std::span<const double> q, std::size_t last) {
  for (std::size_t t = last + 1; t-- > 0;) {
    const auto s = traj.state(t);
    const double lam = infl ? infl->before(t) : 0.0;
    bool ok = true;
    for (std::size_t j = 0; j < q.size() && ok; ++j) ok = q[j] <= s[j] + lam;
    if (ok) return DominanceTime::Finite(t);
  }
  return DominanceTime::Empty();
}

// Largest t in [0, last] with q >= x(t) - lambda_{t-1} componentwise.
DominanceTime scan_lower(const Trajectory& traj, const InflationSchedule* infl,
                         std::span<const double> q, std::size_t last) {
  for (std::size_t t = last + 1; t-- > 0;) {
    const auto s = traj.state(t);
    const double lam = infl ? infl->before(t) : 0.0;
    bool ok = true;
    for (std::size_t j = 0; j < q.size() && ok; ++j) ok = q[j] >= s[j] - lam;
    if (ok) return DominanceTime::Finite(t);
  }
  return DominanceTime::Empty();
}

std::vector<double> shifted(std::span<const double> x, double c) {
  std::vector<double> q(x.begin(), x.end());
  for (double& v : q) v = v + c;
  return q;
}

void require_tail(const Trajectory& traj, bool upper, const std::string& label) {
  const bool ok = upper ? tail_upper_dominating(traj) : tail_lower_dominating(traj);
  if (!ok) {
    throw RefusalError(
        "trajectory " + (label.empty() ? std::string("<unnamed>") : label) +
        ": truncated controlled " + (upper ? "upper" : "lower") +
        " basis requires x(T) " + (upper ? "<=" : ">=") + " x(T-1)");
  }
}

}  // namespace

DominanceTime robust_upper_time(const Trajectory& traj,
                                const InflationSchedule& infl,
                                std::span<const double> x) {
  check_query(traj, x);
  check_schedule(traj, infl);
  return scan_upper(traj, &infl, x, traj.horizon());
}

DominanceTime robust_lower_time(const Trajectory& traj,
                                const InflationSchedule& infl,
                                std::span<const double> x) {
  check_query(traj, x);
  check_schedule(traj, infl);
  return scan_lower(traj, &infl, x, traj.horizon());
}

DominanceTime controlled_upper_time(const Trajectory& traj,
                                    std::span<const double> x) {
  check_query(traj, x);
  return scan_upper(traj, nullptr, x, traj.horizon());
}

DominanceTime controlled_lower_time(const Trajectory& traj,
                                    std::span<const double> x) {
  check_query(traj, x);
  return scan_lower(traj, nullptr, x, traj.horizon());
}

DominanceTime trunc_robust_upper_time(const Trajectory& traj,
                                      const InflationSchedule& infl,
                                      double eps_T, std::span<const double> x) {
  check_query(traj, x);
  check_schedule(traj, infl);
  if (!(eps_T >= 0.0)) throw UsageError("eps_T must be >= 0");
  auto q = shifted(x, -eps_T);
  return scan_upper(traj, &infl, q, traj.horizon());
}

DominanceTime trunc_robust_lower_time(const Trajectory& traj,
                                      const InflationSchedule& infl,
                                      double eps_T, std::span<const double> x) {
  check_query(traj, x);
  check_schedule(traj, infl);
  if (!(eps_T >= 0.0)) throw UsageError("eps_T must be >= 0");
  auto q = shifted(x, eps_T);
  return scan_lower(traj, &infl, q, traj.horizon());
}

double trunc_robust_upper(const Trajectory& traj, const InflationSchedule& infl,
                          double eps_T, double alpha, std::span<const double> x) {
  return dominance_value(trunc_robust_upper_time(traj, infl, eps_T, x), alpha);
}

double trunc_robust_lower(const Trajectory& traj, const InflationSchedule& infl,
                          double eps_T, double alpha, std::span<const double> x) {
  return dominance_value(trunc_robust_lower_time(traj, infl, eps_T, x), alpha);
}

double trunc_controlled_upper(const Trajectory& traj, double alpha,
                              std::span<const double> x) {
  check_query(traj, x);
  require_tail(traj, true, traj.policy_id());
  return dominance_value(scan_upper(traj, nullptr, x, traj.horizon() - 1), alpha);
}

double trunc_controlled_lower(const Trajectory& traj, double alpha,
                              std::span<const double> x) {
  check_query(traj, x);
  require_tail(traj, false, traj.policy_id());
  return dominance_value(scan_lower(traj, nullptr, x, traj.horizon() - 1), alpha);
}

const char* to_string(BasisKind k) {
  switch (k) {
    case BasisKind::RobustUpper:
      return "robust_upper";
    case BasisKind::RobustLower:
      return "robust_lower";
    case BasisKind::ControlledUpper:
      return "controlled_upper";
    case BasisKind::ControlledLower:
      break;
  }
  return "controlled_lower";
}

// ------------------------------------------------------------ DominanceBasis

DominanceBasis::DominanceBasis(std::shared_ptr<const Trajectory> traj,
                               BasisSpec spec)
    : traj_(std::move(traj)), spec_(std::move(spec)) {
  if (!traj_) throw UsageError("basis needs a trajectory");
  if (!(spec_.alpha > 1.0)) throw UsageError("alpha must be > 1");
  n_ = traj_->dim();
  const std::size_t T = traj_->horizon();
  const bool upper = is_upper(spec_.kind);
  std::optional<InflationSchedule> infl;

  if (is_robust(spec_.kind)) {
    if (!spec_.lip) {
      throw UsageError("robust basis " + spec_.label + " needs Lipschitz bounds");
    }
    infl = T >= 1 ? lambda_schedule(*spec_.lip, T) : zero_schedule(0);
    last_ = T;
    if (spec_.truncated) {
      auto e = spec_.epsilon ? spec_.epsilon : traj_->tail().epsilon;
      if (!e) {
        throw RefusalError("trajectory " + spec_.label +
                           ": truncated robust basis needs a tail bound epsilon");
      }
      if (!(*e >= 0.0)) throw UsageError("epsilon must be >= 0");
      eps_ = *e;
    }
  } else {
    if (!spec_.policy) {
      throw UsageError("controlled basis " + spec_.label + " needs a policy");
    }
    if (spec_.truncated) {
      require_tail(*traj_, upper, spec_.label);
      last_ = T - 1;
    } else {
      last_ = T;
    }
  }

  bound_.resize((last_ + 1) * n_);
  for (std::size_t t = 0; t <= last_; ++t) {
    const auto s = traj_->state(t);
    const double lam = infl ? infl->before(t) : 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      bound_[t * n_ + j] = upper ? s[j] + lam : s[j] - lam;
    }
  }
  envelope_ = bound_;
  for (std::size_t t = last_; t-- > 0;) {
    for (std::size_t j = 0; j < n_; ++j) {
      double& e = envelope_[t * n_ + j];
      const double later = envelope_[(t + 1) * n_ + j];
      e = upper ? std::max(e, later) : std::min(e, later);
    }
  }
}

void DominanceBasis::make_query(std::span<const double> x,
                                std::span<double> q) const {
  if (x.size() != n_) throw UsageError("query dimension mismatch");
  const bool upper = is_upper(spec_.kind);
  const bool shift = spec_.truncated && is_robust(spec_.kind);
  for (std::size_t j = 0; j < n_; ++j) {
    q[j] = shift ? (upper ? x[j] + -eps_ : x[j] + eps_) : x[j];
  }
}

bool DominanceBasis::qualifies(std::size_t t, std::span<const double> q) const {
  const double* b = bound_.data() + t * n_;
  if (is_upper(spec_.kind)) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (!(q[j] <= b[j])) return false;
    }
  } else {
    for (std::size_t j = 0; j < n_; ++j) {
      if (!(q[j] >= b[j])) return false;
    }
  }
  return true;
}

bool DominanceBasis::under_envelope(std::size_t t, std::span<const double> q) const {
  const double* e = envelope_.data() + t * n_;
  if (is_upper(spec_.kind)) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (!(q[j] <= e[j])) return false;
    }
  } else {
    for (std::size_t j = 0; j < n_; ++j) {
      if (!(q[j] >= e[j])) return false;
    }
  }
  return true;
}

DominanceTime DominanceBasis::scan_time(std::span<const double> x) const {
  double buf[16];
  std::vector<double> heap;
  std::span<double> q(buf, n_);
  if (n_ > 16) {
    heap.resize(n_);
    q = heap;
  }
  make_query(x, q);
  for (std::size_t t = last_ + 1; t-- > 0;) {
    if (qualifies(t, q)) return DominanceTime::Finite(t);
  }
  return DominanceTime::Empty();
}

DominanceTime DominanceBasis::time(std::span<const double> x) const {
  double buf[16];
  std::vector<double> heap;
  std::span<double> q(buf, n_);
  if (n_ > 16) {
    heap.resize(n_);
    q = heap;
  }
  make_query(x, q);
  return compare_time(q);
}

DominanceTime DominanceBasis::compare_time(std::span<const double> q) const {
  if (q.size() != n_) throw UsageError("query dimension mismatch");
  // Every qualifying t satisfies q <= envelope(t), and envelope is monotone
  // in t, so qualifying indices lie in the prefix where q is under it.
  if (!under_envelope(0, q)) return DominanceTime::Empty();
  std::size_t lo = 0, hi = last_;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (under_envelope(mid, q)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  for (std::size_t t = lo + 1; t-- > 0;) {
    if (qualifies(t, q)) return DominanceTime::Finite(t);
  }
  return DominanceTime::Empty();
}

void DominanceBasis::evaluate_batch(std::span<const double> points,
                                    std::span<double> out, Exec exec) const {
  const std::size_t count = out.size();
  if (points.size() != count * n_) throw UsageError("batch size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(count);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out[i] = value(points.subspan(i * n_, n_));
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out[i] = value(points.subspan(i * n_, n_));
    }
  }
}

}  // namespace trajcert
