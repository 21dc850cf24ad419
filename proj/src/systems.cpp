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

#include "trajcert/systems.hpp"

#include <algorithm>
#include <cmath>

#include "trajcert/error.hpp"

namespace trajcert {

void LipschitzBounds::validate() const {
  if (!(L_x > 0.0) || !std::isfinite(L_x)) throw UsageError("L_x must be > 0");
  if (!(L_w > 0.0) || !std::isfinite(L_w)) throw UsageError("L_w must be > 0");
  if (!(D_w >= 0.0) || !std::isfinite(D_w)) throw UsageError("D_w must be >= 0");
}

const char* to_string(Dominating d) {
  switch (d) {
    case Dominating::UpperDominating:
      return "upper";
    case Dominating::LowerDominating:
      return "lower";
    case Dominating::Neither:
      break;
  }
  return "neither";
}

Dominating dominating_from_string(const std::string& s) {
  if (s == "upper") return Dominating::UpperDominating;
  if (s == "lower") return Dominating::LowerDominating;
  if (s == "neither") return Dominating::Neither;
  throw UsageError("unknown dominating tag '" + s + "'");
}

// ---------------------------------------------------------------- Trajectory

Trajectory::Trajectory(std::size_t dim, std::vector<double> states)
    : dim_(dim), states_(std::move(states)) {
  if (dim_ == 0) throw UsageError("trajectory dimension must be >= 1");
  if (states_.empty() || states_.size() % dim_ != 0) {
    throw UsageError("trajectory needs a whole number of states (>= 1)");
  }
  if (!all_finite(states_)) throw UsageError("trajectory has non-finite state");
}

Trajectory::Trajectory(std::size_t dim, std::vector<double> states,
                       std::size_t input_dim, std::vector<double> inputs,
                       std::string policy_id)
    : Trajectory(dim, std::move(states)) {
  input_dim_ = input_dim;
  has_inputs_ = true;
  inputs_ = std::move(inputs);
  policy_id_ = std::move(policy_id);
  if (inputs_.size() != horizon() * input_dim_) {
    throw UsageError("trajectory inputs must have exactly T entries");
  }
  if (!all_finite(inputs_)) throw UsageError("trajectory has non-finite input");
}

Trajectory Trajectory::FromRows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw UsageError("trajectory needs at least one state");
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) throw UsageError("ragged trajectory");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return Trajectory(rows.front().size(), std::move(flat));
}

Trajectory Trajectory::prefix(std::size_t T) const {
  if (T > horizon()) throw UsageError("prefix longer than trajectory");
  std::vector<double> s(states_.begin(), states_.begin() + (T + 1) * dim_);
  if (!has_inputs_) return Trajectory(dim_, std::move(s));
  std::vector<double> in(inputs_.begin(), inputs_.begin() + T * input_dim_);
  return Trajectory(dim_, std::move(s), input_dim_, std::move(in), policy_id_);
}

// ------------------------------------------------------------ FeedbackPolicy

FeedbackPolicy FeedbackPolicy::Constant(std::string id, std::vector<double> u) {
  if (u.empty() || !all_finite(u)) throw UsageError("bad constant policy");
  FeedbackPolicy p;
  p.id_ = std::move(id);
  p.kind_ = Kind::Constant;
  p.input_dim_ = u.size();
  p.offset_ = std::move(u);
  return p;
}

FeedbackPolicy FeedbackPolicy::Affine(std::string id, std::size_t state_dim,
                                      std::vector<double> gain,
                                      std::vector<double> offset) {
  if (offset.empty() || gain.size() != offset.size() * state_dim ||
      !all_finite(gain) || !all_finite(offset)) {
    throw UsageError("bad affine policy dimensions");
  }
  FeedbackPolicy p;
  p.id_ = std::move(id);
  p.kind_ = Kind::Affine;
  p.input_dim_ = offset.size();
  p.state_dim_ = state_dim;
  p.monotone_ = std::all_of(gain.begin(), gain.end(),
                            [](double g) { return g >= 0.0; });
  p.gain_ = std::move(gain);
  p.offset_ = std::move(offset);
  return p;
}

FeedbackPolicy FeedbackPolicy::Custom(
    std::string id, std::size_t input_dim,
    std::function<void(std::span<const double>, std::span<double>)> fn,
    bool monotone) {
  FeedbackPolicy p;
  p.id_ = std::move(id);
  p.kind_ = Kind::Custom;
  p.input_dim_ = input_dim;
  p.monotone_ = monotone;
  p.fn_ = std::move(fn);
  return p;
}

void FeedbackPolicy::eval(std::span<const double> x, std::span<double> u) const {
  switch (kind_) {
    case Kind::Constant:
      std::copy(offset_.begin(), offset_.end(), u.begin());
      return;
    case Kind::Affine:
      if (x.size() != state_dim_) throw UsageError("policy state dimension");
      for (std::size_t i = 0; i < input_dim_; ++i) {
        double s = offset_[i];
        for (std::size_t j = 0; j < state_dim_; ++j) {
          s += gain_[i * state_dim_ + j] * x[j];
        }
        u[i] = s;
      }
      return;
    case Kind::Custom:
      fn_(x, u);
      return;
  }
}

std::vector<double> FeedbackPolicy::operator()(std::span<const double> x) const {
  std::vector<double> u(input_dim_);
  eval(x, u);
  return u;
}

// ---------------------------------------------------------------- simulation

std::vector<double> step(const SystemModel& sys, std::span<const double> x,
                         std::span<const double> v) {
  std::vector<double> out(sys.dim);
  sys.transition(x, v, out);
  if (!all_finite(out) || !box_contains(sys.state_set, out)) {
    throw StateEscapeError("state " + to_string(out) + " left the state set of " +
                               sys.name,
                           out, -1);
  }
  return out;
}

std::vector<double> sample_disturbance(const BoxRegion& bounds, Rng& rng) {
  std::vector<double> w(bounds.dim());
  for (std::size_t j = 0; j < w.size(); ++j) {
    w[j] = rng.uniform(bounds.lower()[j], bounds.upper()[j]);
  }
  return w;
}

std::vector<double> sample_box(const BoxRegion& box, Rng& rng) {
  return sample_disturbance(box, rng);
}

std::vector<double> sample_region(const RegionSpec& region, Rng& rng) {
  const auto& boxes = region.boxes();
  std::vector<double> vol(boxes.size());
  double total = 0.0;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    double v = 1.0;
    for (std::size_t j = 0; j < boxes[i].dim(); ++j) {
      v *= boxes[i].upper()[j] - boxes[i].lower()[j];
    }
    vol[i] = v;
    total += v;
  }
  std::size_t pick = 0;
  if (total > 0.0) {
    double r = rng.uniform() * total;
    while (pick + 1 < boxes.size() && r >= vol[pick]) r -= vol[pick++];
  } else {
    pick = rng.below(boxes.size());
  }
  return sample_box(boxes[pick], rng);
}

Trajectory simulate(const SystemModel& sys, const StateVector& x0,
                    const InputSource& source, std::size_t T,
                    std::uint64_t seed) {
  if (x0.size() != sys.dim) throw UsageError("x0 dimension mismatch");
  if (!box_contains(sys.state_set, x0)) {
    throw UsageError("x0 " + to_string(x0.span()) + " is outside the state set");
  }
  Rng rng(seed);
  const std::size_t n = sys.dim;
  const std::size_t m = sys.input_dim;
  std::vector<double> states;
  states.reserve((T + 1) * n);
  states.insert(states.end(), x0.values().begin(), x0.values().end());
  std::vector<double> inputs;
  std::vector<double> v(m);
  std::vector<double> next(n);
  std::string policy_id;

  if (std::holds_alternative<PolicyInput>(source)) {
    const auto& p = std::get<PolicyInput>(source).policy;
    if (!p || p->input_dim() != m) throw UsageError("policy input dimension");
    policy_id = p->id();
  }
  if (std::holds_alternative<ConstantInput>(source) &&
      std::get<ConstantInput>(source).u.size() != m) {
    throw UsageError("constant input dimension");
  }
  if (std::holds_alternative<SampledDisturbance>(source) && !sys.input_set) {
    throw UsageError("system has no input set to sample from");
  }
  if (m > 0 && std::holds_alternative<NoInput>(source)) {
    throw UsageError("system " + sys.name + " needs an input source");
  }

  for (std::size_t t = 0; t < T; ++t) {
    std::span<const double> x(states.data() + t * n, n);
    if (std::holds_alternative<ConstantInput>(source)) {
      v = std::get<ConstantInput>(source).u;
    } else if (std::holds_alternative<PolicyInput>(source)) {
      std::get<PolicyInput>(source).policy->eval(x, v);
    } else if (std::holds_alternative<SampledDisturbance>(source)) {
      v = sample_disturbance(*sys.input_set, rng);
    }
    sys.transition(x, v, next);
    if (!all_finite(next) || !box_contains(sys.state_set, next)) {
      throw StateEscapeError("state " + to_string(next) + " at step " +
                                 std::to_string(t + 1) +
                                 " left the state set of " + sys.name,
                             next, static_cast<std::int64_t>(t + 1));
    }
    if (sys.input_role == InputRole::Control) {
      inputs.insert(inputs.end(), v.begin(), v.end());
    }
    states.insert(states.end(), next.begin(), next.end());
  }
  if (sys.input_role == InputRole::Control) {
    return Trajectory(n, std::move(states), m, std::move(inputs), policy_id);
  }
  return Trajectory(n, std::move(states));
}

// --------------------------------------------------------------- monotonicity

namespace {

// y >= x inside the box, with roughly one in four coordinates left equal so
// that ties are exercised.
std::vector<double> sample_above(std::span<const double> x, const BoxRegion& box,
                                 Rng& rng) {
  std::vector<double> y(x.begin(), x.end());
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (rng.uniform() < 0.25) continue;
    y[j] = rng.uniform(x[j], box.upper()[j]);
  }
  return y;
}

}  // namespace

MonotonicityReport audit_monotonicity(const SystemModel& sys,
                                      std::size_t n_pairs,
                                      MonotonicityMode mode,
                                      std::uint64_t seed) {
  if (n_pairs == 0) throw UsageError("n_pairs must be >= 1");
  Rng rng(seed);
  MonotonicityReport rep;
  rep.pairs = n_pairs;
  std::vector<double> fx(sys.dim), fy(sys.dim);
  for (std::size_t i = 0; i < n_pairs; ++i) {
    auto x = sample_box(sys.state_set, rng);
    auto y = sample_above(x, sys.state_set, rng);
    std::vector<double> v, w;
    if (sys.input_dim > 0 && sys.input_set) {
      v = sample_box(*sys.input_set, rng);
      w = mode == MonotonicityMode::SIM ? sample_above(v, *sys.input_set, rng) : v;
    }
    sys.transition(x, v, fx);
    sys.transition(y, w, fy);
    if (!partial_leq(fx, fy)) {
      rep.violations.push_back({std::move(x), std::move(y), std::move(v),
                                std::move(w)});
    }
  }
  return rep;
}

MonotonicityReport audit_policy_monotonicity(const FeedbackPolicy& policy,
                                             const BoxRegion& domain,
                                             std::size_t n_pairs,
                                             std::uint64_t seed) {
  Rng rng(seed);
  MonotonicityReport rep;
  rep.pairs = n_pairs;
  for (std::size_t i = 0; i < n_pairs; ++i) {
    auto x = sample_box(domain, rng);
    auto y = sample_above(x, domain, rng);
    if (!partial_leq(policy(x), policy(y))) {
      rep.violations.push_back({std::move(x), std::move(y), {}, {}});
    }
  }
  return rep;
}

// ----------------------------------------------------------------------- tails

bool tail_upper_dominating(const Trajectory& traj) {
  const std::size_t T = traj.horizon();
  return T >= 1 && partial_leq(traj.state(T), traj.state(T - 1));
}

bool tail_lower_dominating(const Trajectory& traj) {
  const std::size_t T = traj.horizon();
  return T >= 1 && partial_leq(traj.state(T - 1), traj.state(T));
}

Dominating detect_dominating_tail(const Trajectory& traj) {
  if (tail_upper_dominating(traj)) return Dominating::UpperDominating;
  if (tail_lower_dominating(traj)) return Dominating::LowerDominating;
  return Dominating::Neither;
}

TailInfo estimate_compact_tail(const Trajectory& traj, std::size_t tail_window) {
  const std::size_t T = traj.horizon();
  const std::size_t first = tail_window >= T ? 0 : T - tail_window;
  const auto last = traj.state(T);
  double eps = 0.0;
  for (std::size_t t = first; t <= T; ++t) {
    const auto s = traj.state(t);
    for (std::size_t j = 0; j < traj.dim(); ++j) {
      eps = std::max(eps, std::abs(s[j] - last[j]));
    }
  }
  TailInfo info;
  info.epsilon = eps;
  info.upper_dominating = tail_upper_dominating(traj);
  info.lower_dominating = tail_lower_dominating(traj);
  info.dominating = detect_dominating_tail(traj);
  return info;
}

// ------------------------------------------------------------ built-in systems

SystemModel make_lotka_volterra(double tau) {
  if (!(tau >= 0.0 && tau <= 2.2)) {
    throw UsageError("Lotka-Volterra step size must lie in [0, 2.2]");
  }
  static constexpr double kA[5][5] = {{0.0, 0.02, 0.0, 0.0, 0.0},
                                      {0.01, 0.0, 0.0, 0.02, 0.02},
                                      {0.0, 0.0, 0.0, 0.01, 0.02},
                                      {0.0, 0.02, 0.02, 0.0, 0.0},
                                      {0.0, 0.01, 0.01, 0.0, 0.0}};
  static constexpr double kR[5] = {0.22, 0.29, 0.26, 0.25, 0.23};
  static constexpr double kK[5] = {3.81, 2.47, 4.23, 2.93, 4.89};
  auto f = [tau](std::span<const double> x, std::span<const double>,
                 std::span<double> out) {
    for (int i = 0; i < 5; ++i) {
      double growth = kR[i] - kR[i] / kK[i] * x[i];
      for (int j = 0; j < 5; ++j) growth += kA[i][j] * x[j];
      out[i] = x[i] + tau * x[i] * growth;
    }
  };
  return SystemModel{
      "lotka_volterra",
      5,
      0,
      BoxRegion::Cube(5, 0.1, 10.0),
      RegionSpec({BoxRegion::Cube(5, 4.0, 6.0)}),
      RegionSpec({BoxRegion::Cube(5, 0.1, 2.0), BoxRegion::Cube(5, 8.0, 10.0)}),
      std::nullopt,
      InputRole::None,
      f};
}

SystemModel make_traffic(double tau, const StateVector& x_max) {
  if (!(tau >= 0.0 && tau <= 0.01)) {
    throw UsageError("traffic step size must lie in [0, 0.01]");
  }
  if (x_max.size() != 2 || !(x_max[0] > 0.0 && x_max[1] > 0.0)) {
    throw UsageError("traffic x_max must be two positive numbers");
  }
  const double m1 = x_max[0];
  const double m2 = x_max[1];
  auto f = [tau, m1, m2](std::span<const double> x, std::span<const double> u,
                         std::span<double> out) {
    const double phi1 = m1 * (1.0 - std::exp(-x[0]));
    const double phi2 = m2 * (1.0 - std::exp(-x[1]));
    const double gate = x[1] <= m2 ? 1.0 : 0.0;
    out[0] = x[0] + tau * (u[0] - phi1);
    out[1] = x[1] + tau * (u[1] * gate * phi1 - phi2);
  };
  return SystemModel{
      "traffic",
      2,
      2,
      BoxRegion::Cube(2, 0.0, 10.0),
      RegionSpec({BoxRegion::Cube(2, 4.0, 6.0)}),
      RegionSpec({BoxRegion::Cube(2, 0.0, 1.0),
                  BoxRegion(StateVector{0.0, 9.0}, StateVector{10.0, 10.0}),
                  BoxRegion(StateVector{9.0, 0.0}, StateVector{10.0, 10.0})}),
      BoxRegion(StateVector{0.0, 0.1}, StateVector{10.0, 0.9}),
      InputRole::Control,
      f};
}

SystemModel make_contractive_linear(std::size_t n) {
  if (n == 0) throw UsageError("dimension must be >= 1");
  auto f = [](std::span<const double> x, std::span<const double> w,
              std::span<double> out) {
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = 0.5 * x[j] + 0.1 * w[j];
  };
  return SystemModel{
      "contractive_linear",
      n,
      n,
      BoxRegion::Cube(n, -1.0, 1.0),
      RegionSpec({BoxRegion::Cube(n, -0.2, 0.2)}),
      RegionSpec({BoxRegion::Cube(n, 0.9, 1.0), BoxRegion::Cube(n, -1.0, -0.9)}),
      BoxRegion::Cube(n, -1.0, 1.0),
      InputRole::Disturbance,
      f};
}

LipschitzBounds contractive_linear_lipschitz() {
  // Inf-norm constants; D_w is the inf-norm diameter of [-1,1]^n.
  return LipschitzBounds{0.5, 0.1, 2.0};
}

}  // namespace trajcert
