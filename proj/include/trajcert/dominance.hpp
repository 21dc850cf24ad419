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

// Dominance times and dominance functions computed from one stored trajectory.
//
// An upper dominance time is the last index t at which the (inflated)
// trajectory state lies above the query point; a lower one is the mirror
// image. The function value is 1/(t+1), or alpha when no index qualifies.

#ifndef TRAJCERT_DOMINANCE_HPP_
#define TRAJCERT_DOMINANCE_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajcert/parallel.hpp"
#include "trajcert/systems.hpp"

namespace trajcert {

inline constexpr double kDefaultAlpha = 2.0;

struct DominanceTime {
  enum class Case { Finite, Infinite, Empty };
  Case kind = Case::Empty;
  std::size_t t = 0;

  static DominanceTime Finite(std::size_t t) { return {Case::Finite, t}; }
  static DominanceTime Infinite() { return {Case::Infinite, 0}; }
  static DominanceTime Empty() { return {Case::Empty, 0}; }

  friend bool operator==(const DominanceTime& a, const DominanceTime& b) {
    return a.kind == b.kind && (a.kind != Case::Finite || a.t == b.t);
  }
};

// Disturbance inflation lambda_t = L_w * D_w * sum_{tau=0}^{t} L_x^tau for
// t = 0..T-1, plus lambda_{-1} = 0.
class InflationSchedule {
 public:
  InflationSchedule() = default;
  InflationSchedule(LipschitzBounds lip, std::vector<double> lambda)
      : lip_(lip), lambda_(std::move(lambda)) {}

  const LipschitzBounds& lip() const { return lip_; }
  // lambda_t, t >= 0.
  double at(std::size_t t) const { return lambda_.at(t); }
  // The inflation applied at trajectory index t, i.e. lambda_{t-1}.
  double before(std::size_t t) const { return t == 0 ? 0.0 : lambda_.at(t - 1); }
  std::size_t size() const { return lambda_.size(); }
  const std::vector<double>& values() const { return lambda_; }

 private:
  LipschitzBounds lip_;
  std::vector<double> lambda_;
};

InflationSchedule lambda_schedule(const LipschitzBounds& lip, std::size_t T);
// Zero inflation covering indices 0..T (disturbance-free data).
InflationSchedule zero_schedule(std::size_t T);

double dominance_value(const DominanceTime& time, double alpha);

// Full variants: sup over the stored indices 0..T.
DominanceTime robust_upper_time(const Trajectory& traj,
                                const InflationSchedule& infl,
                                std::span<const double> x);
DominanceTime robust_lower_time(const Trajectory& traj,
                                const InflationSchedule& infl,
                                std::span<const double> x);
DominanceTime controlled_upper_time(const Trajectory& traj,
                                    std::span<const double> x);
DominanceTime controlled_lower_time(const Trajectory& traj,
                                    std::span<const double> x);

// Truncated variants. The robust ones compare x - eps (upper) or x + eps
// (lower) against indices 0..T; the controlled ones use indices 0..T-1 and
// refuse trajectories whose tail does not dominate in the required direction.
DominanceTime trunc_robust_upper_time(const Trajectory& traj,
                                      const InflationSchedule& infl,
                                      double eps_T, std::span<const double> x);
DominanceTime trunc_robust_lower_time(const Trajectory& traj,
                                      const InflationSchedule& infl,
                                      double eps_T, std::span<const double> x);
double trunc_robust_upper(const Trajectory& traj, const InflationSchedule& infl,
                          double eps_T, double alpha, std::span<const double> x);
double trunc_robust_lower(const Trajectory& traj, const InflationSchedule& infl,
                          double eps_T, double alpha, std::span<const double> x);
double trunc_controlled_upper(const Trajectory& traj, double alpha,
                              std::span<const double> x);
double trunc_controlled_lower(const Trajectory& traj, double alpha,
                              std::span<const double> x);

enum class BasisKind { RobustUpper, RobustLower, ControlledUpper, ControlledLower };

const char* to_string(BasisKind k);
inline bool is_upper(BasisKind k) {
  return k == BasisKind::RobustUpper || k == BasisKind::ControlledUpper;
}
inline bool is_robust(BasisKind k) {
  return k == BasisKind::RobustUpper || k == BasisKind::RobustLower;
}

struct BasisSpec {
  BasisKind kind = BasisKind::RobustUpper;
  bool truncated = true;
  double alpha = kDefaultAlpha;
  // Robust kinds.
  std::optional<LipschitzBounds> lip;
  // Truncated robust kinds; falls back to the trajectory's tail epsilon.
  std::optional<double> epsilon;
  // Controlled kinds.
  std::shared_ptr<const FeedbackPolicy> policy;
  // Used in refusal messages.
  std::string label;
};

// One trajectory bound to one of the eight dominance-function variants, with
// the inflated comparison values precomputed and a suffix-envelope index for
// fast queries. Immutable; safe to evaluate from many threads.
class DominanceBasis {
 public:
  DominanceBasis(std::shared_ptr<const Trajectory> traj, BasisSpec spec);

  BasisKind kind() const { return spec_.kind; }
  bool truncated() const { return spec_.truncated; }
  double alpha() const { return spec_.alpha; }
  double epsilon() const { return eps_; }
  const std::string& label() const { return spec_.label; }
  const Trajectory& trajectory() const { return *traj_; }
  const std::shared_ptr<const Trajectory>& trajectory_ptr() const { return traj_; }
  const std::shared_ptr<const FeedbackPolicy>& policy() const { return spec_.policy; }
  // Last index searched (T, or T-1 for truncated controlled kinds).
  std::size_t last_index() const { return last_; }

  // Envelope-accelerated query.
  DominanceTime time(std::span<const double> x) const;
  // Plain backward scan; the reference that time() must match exactly.
  DominanceTime scan_time(std::span<const double> x) const;
  double value(std::span<const double> x) const {
    return dominance_value(time(x), spec_.alpha);
  }

  // Time and value for a comparison vector q that already includes the
  // truncation shift. On an upper robust basis compare_value(x) is the value
  // at x + eps without the rounding of fl(fl(x + eps) - eps).
  DominanceTime compare_time(std::span<const double> q) const;
  double compare_value(std::span<const double> q) const {
    return dominance_value(compare_time(q), spec_.alpha);
  }

  // out[i] = value(points[i*n .. i*n+n)).
  void evaluate_batch(std::span<const double> points, std::span<double> out,
                      Exec exec) const;

 private:
  bool qualifies(std::size_t t, std::span<const double> q) const;
  bool under_envelope(std::size_t t, std::span<const double> q) const;
  void make_query(std::span<const double> x, std::span<double> q) const;

  std::shared_ptr<const Trajectory> traj_;
  BasisSpec spec_;
  double eps_ = 0.0;
  std::size_t n_ = 0;
  std::size_t last_ = 0;
  std::vector<double> bound_;     // x(t) +/- lambda_{t-1}, flat
  std::vector<double> envelope_;  // suffix max (upper) or min (lower)
};

}  // namespace trajcert

#endif  // TRAJCERT_DOMINANCE_HPP_
