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

// Discrete-time systems, trajectories, feedback policies and tail analysis.

#ifndef TRAJCERT_SYSTEMS_HPP_
#define TRAJCERT_SYSTEMS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "trajcert/order.hpp"
#include "trajcert/rng.hpp"

namespace trajcert {

enum class InputRole { None, Disturbance, Control };

// out = f(x, v). v is empty when the system has no input.
using TransitionFn = std::function<void(
    std::span<const double> x, std::span<const double> v, std::span<double> out)>;

struct SystemModel {
  std::string name;
  std::size_t dim = 0;
  std::size_t input_dim = 0;
  BoxRegion state_set;
  RegionSpec initial_set;
  RegionSpec unsafe_set;
  std::optional<BoxRegion> input_set;
  InputRole input_role = InputRole::None;
  TransitionFn transition;
};

struct LipschitzBounds {
  double L_x = 1.0;
  double L_w = 1.0;
  double D_w = 0.0;

  // Throws UsageError unless L_x, L_w > 0 and D_w >= 0.
  void validate() const;
};

enum class Dominating { UpperDominating, LowerDominating, Neither };

const char* to_string(Dominating d);
Dominating dominating_from_string(const std::string& s);

struct TailInfo {
  std::optional<double> epsilon;
  Dominating dominating = Dominating::Neither;
  // Both conditions are recorded; a constant tail satisfies both.
  bool upper_dominating = false;
  bool lower_dominating = false;
};

// States x(0..T) and optional inputs v(0..T-1), stored flat.
class Trajectory {
 public:
  Trajectory(std::size_t dim, std::vector<double> states);
  Trajectory(std::size_t dim, std::vector<double> states, std::size_t input_dim,
             std::vector<double> inputs, std::string policy_id);

  // Convenience for tests and small examples.
  static Trajectory FromRows(const std::vector<std::vector<double>>& rows);

  std::size_t dim() const { return dim_; }
  std::size_t horizon() const { return states_.size() / dim_ - 1; }
  std::size_t input_dim() const { return input_dim_; }
  bool has_inputs() const { return has_inputs_; }

  std::span<const double> state(std::size_t t) const {
    return {states_.data() + t * dim_, dim_};
  }
  std::span<const double> input(std::size_t t) const {
    return {inputs_.data() + t * input_dim_, input_dim_};
  }
  const std::vector<double>& flat_states() const { return states_; }
  const std::vector<double>& flat_inputs() const { return inputs_; }

  const std::string& policy_id() const { return policy_id_; }
  const TailInfo& tail() const { return tail_; }
  void set_tail(TailInfo tail) { tail_ = std::move(tail); }

  // Trajectory restricted to indices 0..T (tail metadata is not carried over).
  Trajectory prefix(std::size_t T) const;

 private:
  std::size_t dim_;
  std::vector<double> states_;
  std::size_t input_dim_ = 0;
  bool has_inputs_ = false;
  std::vector<double> inputs_;
  std::string policy_id_;
  TailInfo tail_;
};

// A known feedback controller u = pi(x).
class FeedbackPolicy {
 public:
  enum class Kind { Constant, Affine, Custom };

  static FeedbackPolicy Constant(std::string id, std::vector<double> u);
  // u = gain * x + offset; gain is row-major (input_dim x state_dim).
  // Flagged monotone iff every gain entry is nonnegative.
  static FeedbackPolicy Affine(std::string id, std::size_t state_dim,
                               std::vector<double> gain,
                               std::vector<double> offset);
  static FeedbackPolicy Custom(std::string id, std::size_t input_dim,
                               std::function<void(std::span<const double>,
                                                  std::span<double>)> fn,
                               bool monotone);

  const std::string& id() const { return id_; }
  Kind kind() const { return kind_; }
  bool monotone() const { return monotone_; }
  std::size_t input_dim() const { return input_dim_; }
  const std::vector<double>& gain() const { return gain_; }
  const std::vector<double>& offset() const { return offset_; }

  void eval(std::span<const double> x, std::span<double> u) const;
  std::vector<double> operator()(std::span<const double> x) const;

 private:
  std::string id_;
  Kind kind_ = Kind::Constant;
  bool monotone_ = true;
  std::size_t input_dim_ = 0;
  std::size_t state_dim_ = 0;
  std::vector<double> gain_;
  std::vector<double> offset_;
  std::function<void(std::span<const double>, std::span<double>)> fn_;
};

struct NoInput {};
struct ConstantInput {
  std::vector<double> u;
};
struct PolicyInput {
  std::shared_ptr<const FeedbackPolicy> policy;
};
struct SampledDisturbance {};
using InputSource =
    std::variant<NoInput, ConstantInput, PolicyInput, SampledDisturbance>;

// f(x, v), throwing StateEscapeError if the result leaves the state set.
std::vector<double> step(const SystemModel& sys, std::span<const double> x,
                         std::span<const double> v);

// Inputs are recorded iff the system's input role is Control. Deterministic
// in seed (only SampledDisturbance consumes randomness).
Trajectory simulate(const SystemModel& sys, const StateVector& x0,
                    const InputSource& source, std::size_t T,
                    std::uint64_t seed);

std::vector<double> sample_disturbance(const BoxRegion& bounds, Rng& rng);
// Uniform point in a box; alias of sample_disturbance for state boxes.
std::vector<double> sample_box(const BoxRegion& box, Rng& rng);
// Uniform over a union of boxes, choosing a box proportional to volume
// (degenerate unions fall back to a uniform choice of box).
std::vector<double> sample_region(const RegionSpec& region, Rng& rng);

enum class MonotonicityMode { SM, SIM };

struct MonotonicityViolation {
  std::vector<double> x, x_hi, v, v_hi;
};

struct MonotonicityReport {
  std::size_t pairs = 0;
  std::vector<MonotonicityViolation> violations;
};

MonotonicityReport audit_monotonicity(const SystemModel& sys,
                                      std::size_t n_pairs,
                                      MonotonicityMode mode,
                                      std::uint64_t seed);

// Pairs x <= y sampled from the box; counts pi(x) <= pi(y) failures.
MonotonicityReport audit_policy_monotonicity(const FeedbackPolicy& policy,
                                             const BoxRegion& domain,
                                             std::size_t n_pairs,
                                             std::uint64_t seed);

bool tail_upper_dominating(const Trajectory& traj);
bool tail_lower_dominating(const Trajectory& traj);
// UpperDominating is preferred when both hold; T = 0 gives Neither.
Dominating detect_dominating_tail(const Trajectory& traj);

// epsilon = max over t in [T - window, T] of ||x(t) - x(T)||_inf; the window
// is clipped to T. Also fills the dominating flags.
TailInfo estimate_compact_tail(const Trajectory& traj, std::size_t tail_window);

// Built-in systems.
SystemModel make_lotka_volterra(double tau);
SystemModel make_traffic(double tau, const StateVector& x_max);
// x+ = 0.5 x + 0.1 w on [-1,1]^n with w in [-1,1]^n.
SystemModel make_contractive_linear(std::size_t n);
LipschitzBounds contractive_linear_lipschitz();

}  // namespace trajcert

#endif  // TRAJCERT_SYSTEMS_HPP_
